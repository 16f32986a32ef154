#pragma once

#include <cmath>
#include <random>

#include "ssclab/qcore.hpp"

namespace testutil {

using namespace ssclab;

inline Mat random_density(std::size_t d, std::size_t rank, std::uint64_t seed) {
    const Mat g = random_isometry_matrix(1, d * rank, seed);
    Mat x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(rank));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = g(i * x.cols() + j, 0);
    }
    Mat rho = x * x.adjoint();
    return rho / rho.trace();
}

inline double h2(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

inline LabeledState ket(const std::vector<Subsystem>& subs, const std::vector<std::pair<std::size_t, cplx>>& terms) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(total_dim(subs)));
    for (const auto& [i, c] : terms) v(static_cast<Eigen::Index>(i)) += c;
    v.normalize();
    return LabeledState::pure(subs, v);
}

}  // namespace testutil
