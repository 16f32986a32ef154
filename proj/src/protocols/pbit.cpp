#include <algorithm>
#include <cmath>

#include "ssclab/protocols.hpp"

namespace ssclab {

namespace {

Mat swap_operator(std::size_t s) {
    const auto n = static_cast<Eigen::Index>(s);
    Mat m = Mat::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m(j * n + i, i * n + j) = 1.0;
    }
    return m;
}

Mat shield_density(const PbitSpec& spec, std::uint64_t seed) {
    const std::size_t S = spec.shield_a * spec.shield_b;
    const auto n = static_cast<Eigen::Index>(S);
    if (spec.shield_state) {
        const auto& st = *spec.shield_state;
        if (st.dim() != S) throw ValidationError("shield state dimension does not match the shield registers", "shield_state");
        return st.density();
    }
    switch (spec.shield) {
        case ShieldKind::MaximallyMixed: return Mat::Identity(n, n) / static_cast<double>(S);
        case ShieldKind::Flower: {
            if (spec.shield_a != spec.shield_b) throw ValidationError("flower shield needs equal shield dimensions", "shield");
            const double s = static_cast<double>(spec.shield_a);
            const Mat I = Mat::Identity(n, n);
            const Mat F = swap_operator(spec.shield_a);
            const Mat sym = 0.5 * (I + F) / (s * (s + 1) / 2);
            const Mat anti = 0.5 * (I - F) / (s * (s - 1) / 2);
            return 0.5 * (sym + anti);
        }
        case ShieldKind::Random: {
            const Mat v = random_isometry_matrix(1, S * S, seed ^ 0x5eed5eedULL);
            Mat rho = Mat::Zero(n, n);
            for (Eigen::Index e = 0; e < n; ++e) {
                Vec col(n);
                for (Eigen::Index i = 0; i < n; ++i) col(i) = v(i * n + e, 0);
                rho += col * col.adjoint();
            }
            return rho;
        }
    }
    throw ConsistencyError("unknown shield kind");
}

std::vector<Mat> twists(const PbitSpec& spec, std::uint64_t seed) {
    const std::size_t S = spec.shield_a * spec.shield_b;
    const auto n = static_cast<Eigen::Index>(S);
    std::vector<Mat> u;
    if (!spec.twist_unitaries.empty()) {
        if (spec.twist_unitaries.size() != spec.key_dim) throw ValidationError("need one twist unitary per key value", "twist");
        for (const auto& m : spec.twist_unitaries) {
            if (m.rows() != n || m.cols() != n) throw ValidationError("twist unitary has the wrong dimension", "twist");
            if ((m.adjoint() * m - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
                throw ValidationError("twist matrix is not unitary", "twist");
            }
        }
        return spec.twist_unitaries;
    }
    for (std::size_t i = 0; i < spec.key_dim; ++i) {
        switch (spec.twist) {
            case TwistKind::Identity: u.push_back(Mat::Identity(n, n)); break;
            case TwistKind::Swap:
                if (spec.shield_a != spec.shield_b) throw ValidationError("swap twist needs equal shield dimensions", "twist");
                u.push_back(i % 2 == 0 ? Mat::Identity(n, n) : swap_operator(spec.shield_a));
                break;
            case TwistKind::Random:
                u.push_back(i == 0 ? Mat::Identity(n, n) : random_isometry_matrix(S, S, seed + 7919 * i));
                break;
        }
    }
    return u;
}

}  // namespace

LabeledState make_pbit(const PbitSpec& spec, std::uint64_t seed) {
    if (spec.key_dim < 1 || spec.shield_a < 1 || spec.shield_b < 1) throw ValidationError("pbit dimensions must be positive");
    const Mat sigma = shield_density(spec, seed);
    const auto u = twists(spec, seed);
    const std::size_t k = spec.key_dim;
    const auto S = sigma.rows();
    const auto K = static_cast<Eigen::Index>(k);
    // Layout [key, key_B, shield, shield_B].
    Mat g = Mat::Zero(K * K * S, K * K * S);
    for (Eigen::Index i = 0; i < K; ++i) {
        const Mat left = u[static_cast<std::size_t>(i)] * sigma;
        for (Eigen::Index j = 0; j < K; ++j) {
            g.block((i * K + i) * S, (j * K + j) * S, S, S) =
                left * u[static_cast<std::size_t>(j)].adjoint() / static_cast<double>(k);
        }
    }
    const LabeledState raw = LabeledState::mixed(
        {{"key", k}, {"key_B", k}, {"shield", spec.shield_a}, {"shield_B", spec.shield_b}}, g, 1e-9);
    return reorder(raw, {"key", "shield", "key_B", "shield_B"});
}

double key_correlation_defect(const LabeledState& gamma, const std::string& key_a, const std::string& key_b) {
    const Mat rho = reorder(reduce_to(gamma, {key_a, key_b}), {key_a, key_b}).density();
    const std::size_t k = gamma.dim_of(key_a);
    if (gamma.dim_of(key_b) != k) throw ValidationError("key registers differ in dimension");
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double p = rho(static_cast<Eigen::Index>(i * k + j), static_cast<Eigen::Index>(i * k + j)).real();
            worst = std::max(worst, std::abs(p - (i == j ? 1.0 / static_cast<double>(k) : 0.0)));
        }
    }
    return worst;
}

std::string to_string(TwistKind t) {
    switch (t) {
        case TwistKind::Identity: return "identity";
        case TwistKind::Swap: return "swap";
        case TwistKind::Random: return "random";
    }
    return "?";
}

std::string to_string(ShieldKind s) {
    switch (s) {
        case ShieldKind::MaximallyMixed: return "maximally-mixed";
        case ShieldKind::Flower: return "flower";
        case ShieldKind::Random: return "random";
    }
    return "?";
}

TwistKind twist_from_string(const std::string& s) {
    for (auto t : {TwistKind::Identity, TwistKind::Swap, TwistKind::Random}) {
        if (to_string(t) == s) return t;
    }
    throw ValidationError("unknown twist '" + s + "'", "twist");
}

ShieldKind shield_from_string(const std::string& s) {
    for (auto k : {ShieldKind::MaximallyMixed, ShieldKind::Flower, ShieldKind::Random}) {
        if (to_string(k) == s) return k;
    }
    throw ValidationError("unknown shield '" + s + "'", "shield");
}

}  // namespace ssclab
