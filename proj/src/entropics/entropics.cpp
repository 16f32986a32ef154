#include "ssclab/entropics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ssclab/simd.hpp"

namespace ssclab {

namespace {

void check_disjoint(std::initializer_list<const Labels*> groups, const char* what) {
    std::set<std::string> seen;
    for (const Labels* g : groups) {
        for (const auto& n : *g) {
            if (!seen.insert(n).second) throw ValidationError(std::string(what) + ": label '" + n + "' appears twice", n);
        }
    }
}

Labels join(const Labels& a, const Labels& b) {
    Labels out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// Gram matrix of the smaller side of a pure bipartition; the nonzero spectrum
// is shared by both sides.
Mat pure_marginal(const LabeledState& s, const Labels& part) {
    Labels rest;
    for (const auto& sub : s.subsystems()) {
        if (std::find(part.begin(), part.end(), sub.name) == part.end()) rest.push_back(sub.name);
    }
    const std::size_t dp = s.dim_of(part);
    const std::size_t dr = s.dim() / dp;
    const Labels& small = dp <= dr ? part : rest;
    const Labels& big = dp <= dr ? rest : part;
    Labels order = join(small, big);
    const LabeledState r = reorder(s, order);
    const std::size_t rows = std::min(dp, dr), len = std::max(dp, dr);
    const cplx* data = r.amplitudes().data();
    Mat g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const cplx v = simd::dotc(data + i * len, data + j * len, len);
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(v);
        }
    }
    return g;
}

}  // namespace

EntropyReport entropy_of_spectrum(const Eigen::VectorXd& eigenvalues) {
    EntropyReport rep;
    rep.spectrum.reserve(static_cast<std::size_t>(eigenvalues.size()));
    double h = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        double lam = eigenvalues(i);
        if (lam < 0.0) {
            if (lam < -kClipFloor) {
                throw ValidationError("entropy: eigenvalue " + std::to_string(lam) + " below the clipping floor");
            }
            rep.clipped_mass += -lam;
            lam = 0.0;
        }
        rep.spectrum.push_back(lam);
        if (lam >= kSpectrumFloor) h -= lam * std::log2(lam);
    }
    rep.value = std::max(h, 0.0);
    return rep;
}

EntropyReport entropy_report(const LabeledState& s, const Labels& part) {
    check_disjoint({&part}, "entropy");
    for (const auto& n : part) {
        if (!s.has(n)) throw ValidationError("entropy: unknown label '" + n + "'", n);
    }
    if (part.empty()) return {};
    if (s.is_pure()) {
        if (part.size() == s.subsystems().size()) return entropy_of_spectrum(Eigen::VectorXd::Ones(1));
        return entropy_of_spectrum(hermitian_eigenvalues(pure_marginal(s, part)));
    }
    const Mat rho = part.size() == s.subsystems().size() ? s.density_matrix() : reduce_to(s, part).density_matrix();
    return entropy_of_spectrum(hermitian_eigenvalues(rho));
}

double entropy(const LabeledState& s, const Labels& part) { return entropy_report(s, part).value; }

double mutual_information(const LabeledState& s, const Labels& a, const Labels& b) {
    check_disjoint({&a, &b}, "mutual_information");
    return entropy(s, a) + entropy(s, b) - entropy(s, join(a, b));
}

double conditional_mutual_information(const LabeledState& s, const Labels& a, const Labels& b, const Labels& c) {
    check_disjoint({&a, &b, &c}, "conditional_mutual_information");
    return entropy(s, join(a, c)) + entropy(s, join(b, c)) - entropy(s, join(join(a, b), c)) - entropy(s, c);
}

double coherent_information(const LabeledState& s, const Labels& a, const Labels& b) {
    check_disjoint({&a, &b}, "coherent_information");
    return entropy(s, b) - entropy(s, join(a, b));
}

double shannon_entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h;
}

}  // namespace ssclab
