#include <cmath>

#include "ssclab/entropics.hpp"
#include "ssclab/protocols.hpp"

namespace ssclab {

TypicalSet typical_set(const std::vector<double>& spectrum, std::size_t n, double eps) {
    if (n < 1) throw ValidationError("typical_set: n must be positive", "n");
    if (!(eps > 0.0)) throw ValidationError("typical_set: epsilon must be positive", "epsilon");
    const std::size_t d = spectrum.size();
    if (d == 0) throw ValidationError("typical_set: empty spectrum");
    double count = std::pow(static_cast<double>(d), static_cast<double>(n));
    if (count > static_cast<double>(1u << 22)) throw ValidationError("typical_set: too many index strings", "n");

    TypicalSet t;
    t.entropy = shannon_entropy(spectrum);
    std::vector<double> logs(d);
    for (std::size_t i = 0; i < d; ++i) logs[i] = spectrum[i] > 0.0 ? -std::log2(spectrum[i]) : INFINITY;

    const auto total = static_cast<std::size_t>(count);
    std::vector<std::size_t> digit(n, 0);
    for (std::size_t x = 0; x < total; ++x) {
        double surprisal = 0.0, prob = 1.0;
        for (std::size_t c = 0; c < n; ++c) {
            surprisal += logs[digit[c]];
            prob *= spectrum[digit[c]];
        }
        if (std::isfinite(surprisal) && std::abs(surprisal / static_cast<double>(n) - t.entropy) <= eps + 1e-12) {
            t.indices.push_back(x);
            t.mass += prob;
        }
        for (std::size_t c = n; c-- > 0;) {
            if (++digit[c] < d) break;
            digit[c] = 0;
        }
    }
    return t;
}

}  // namespace ssclab
