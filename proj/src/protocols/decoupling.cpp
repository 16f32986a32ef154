#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "ssclab/entropics.hpp"
#include "ssclab/protocols.hpp"

namespace ssclab {

DecouplingRunReport decoupling_experiment(const LabeledState& psi_ae, std::size_t n, double epsilon, std::uint64_t seed) {
    if (!psi_ae.is_pure() || psi_ae.subsystems().size() != 2) {
        throw ValidationError("decoupling_experiment: expected a pure state on exactly two subsystems", "state");
    }
    const auto dA = static_cast<Eigen::Index>(psi_ae.subsystems()[0].dim);
    const auto dE = static_cast<Eigen::Index>(psi_ae.subsystems()[1].dim);
    Mat m(dA, dE);
    for (Eigen::Index i = 0; i < dA; ++i) {
        for (Eigen::Index j = 0; j < dE; ++j) m(i, j) = psi_ae.amplitudes()(i * dE + j);
    }
    Eigen::JacobiSVD<Mat> svd(m);
    std::vector<double> lambda;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) lambda.push_back(svd.singularValues()(i) * svd.singularValues()(i));

    DecouplingRunReport r;
    r.n = n;
    r.epsilon = epsilon;
    r.seed = seed;
    r.mutual_info = 2.0 * shannon_entropy(lambda);
    const TypicalSet t = typical_set(lambda, n, epsilon);
    r.typical_mass = t.mass;
    r.typical_dim = t.indices.size();
    if (t.indices.empty()) {
        throw ValidationError("decoupling_experiment: typical subspace is empty (typical_mass 0)", "epsilon");
    }
    const double T = static_cast<double>(t.indices.size());
    const double target = std::pow(2.0, static_cast<double>(n) * r.mutual_info);
    r.dim_a1 = static_cast<std::size_t>(std::clamp(std::round(target), 1.0, T));
    r.dim_a2 = (t.indices.size() + r.dim_a1 - 1) / r.dim_a1;
    const std::size_t block = r.dim_a2 * t.indices.size();
    if (block > 4096) throw ValidationError("decoupling_experiment: reduced state too large to compare", "n");

    // Schmidt form: sum_{x in T} c_x V|x> (x) |x>_E; E^n is expressed in the Schmidt basis.
    const Mat V = random_isometry_matrix(t.indices.size(), r.dim_a1 * r.dim_a2, seed);
    std::vector<double> lam_x(t.indices.size());
    const std::size_t d = lambda.size();
    for (std::size_t k = 0; k < t.indices.size(); ++k) {
        std::size_t x = t.indices[k];
        double p = 1.0;
        for (std::size_t c = 0; c < n; ++c) {
            p *= lambda[x % d];
            x /= d;
        }
        lam_x[k] = p;
    }
    const auto nT = static_cast<Eigen::Index>(t.indices.size());
    const auto a1 = static_cast<Eigen::Index>(r.dim_a1), a2 = static_cast<Eigen::Index>(r.dim_a2);
    // amplitudes over (a1, [a2, t])
    Mat amp(a1, a2 * nT);
    for (Eigen::Index i = 0; i < a1; ++i) {
        for (Eigen::Index j = 0; j < a2; ++j) {
            for (Eigen::Index k = 0; k < nT; ++k) {
                amp(i, j * nT + k) = V(i * a2 + j, k) * std::sqrt(lam_x[static_cast<std::size_t>(k)] / t.mass);
            }
        }
    }
    const Mat rho = amp.transpose() * amp.conjugate();
    Mat sigma = Mat::Zero(a2 * nT, a2 * nT);
    for (Eigen::Index j = 0; j < a2; ++j) {
        for (Eigen::Index k = 0; k < nT; ++k) sigma(j * nT + k, j * nT + k) = lam_x[static_cast<std::size_t>(k)] / static_cast<double>(a2);
    }
    const double inside = 2.0 * trace_distance(rho, sigma);
    r.trace_distance = std::min(1.0, 0.5 * (inside + (1.0 - t.mass)));
    return r;
}

json to_json(const DecouplingRunReport& r) {
    return {{"n", r.n},
            {"epsilon", r.epsilon},
            {"dimA1", r.dim_a1},
            {"dimA2", r.dim_a2},
            {"typical_dim", r.typical_dim},
            {"trace_distance", r.trace_distance},
            {"typical_mass", r.typical_mass},
            {"mutual_info", r.mutual_info},
            {"seed", r.seed}};
}

}  // namespace ssclab
