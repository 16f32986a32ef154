#include <Eigen/Eigenvalues>

#include "ssclab/qcore.hpp"
#include "ssclab/simd.hpp"

namespace ssclab {

std::vector<std::size_t> dims_of(std::span<const Subsystem> subsystems) {
    std::vector<std::size_t> d;
    d.reserve(subsystems.size());
    for (const auto& s : subsystems) d.push_back(s.dim);
    return d;
}

std::vector<std::size_t> permutation_map(std::span<const std::size_t> old_dims, std::span<const std::size_t> perm) {
    const std::size_t k = old_dims.size();
    std::vector<std::size_t> old_stride(k, 1);
    for (std::size_t j = k; j-- > 1;) old_stride[j - 1] = old_stride[j] * old_dims[j];

    std::size_t n = 1;
    for (auto d : old_dims) n *= d;

    std::vector<std::size_t> new_dims(k), step(k);
    for (std::size_t j = 0; j < k; ++j) {
        new_dims[j] = old_dims[perm[j]];
        step[j] = old_stride[perm[j]];
    }

    std::vector<std::size_t> src(n);
    std::vector<std::size_t> digit(k, 0);
    std::size_t old_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
        src[i] = old_index;
        // odometer over the new order, last digit fastest
        for (std::size_t j = k; j-- > 0;) {
            if (++digit[j] < new_dims[j]) {
                old_index += step[j];
                break;
            }
            old_index -= step[j] * (new_dims[j] - 1);
            digit[j] = 0;
        }
    }
    return src;
}

Vec apply_leading(const Mat& m, const Vec& x, std::size_t rest) {
    const auto in = static_cast<std::size_t>(m.cols());
    const auto out = static_cast<std::size_t>(m.rows());
    if (static_cast<std::size_t>(x.size()) != in * rest) {
        throw ValidationError("apply_leading: vector length does not match operator and spectator dims");
    }
    if (rest < 4) {
        Vec y(static_cast<Eigen::Index>(out * rest));
        Eigen::Map<const Mat> xm(x.data(), static_cast<Eigen::Index>(rest), static_cast<Eigen::Index>(in));
        Eigen::Map<Mat> ym(y.data(), static_cast<Eigen::Index>(rest), static_cast<Eigen::Index>(out));
        ym.noalias() = xm * m.transpose();
        return y;
    }
    Vec y = Vec::Zero(static_cast<Eigen::Index>(out * rest));
    for (std::size_t r = 0; r < out; ++r) {
        for (std::size_t c = 0; c < in; ++c) {
            const cplx alpha = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            if (alpha == cplx(0.0)) continue;
            simd::axpy(alpha, x.data() + c * rest, y.data() + r * rest, rest);
        }
    }
    return y;
}

Mat apply_leading(const Mat& m, const Mat& x, std::size_t rest) {
    const auto out = static_cast<Eigen::Index>(static_cast<std::size_t>(m.rows()) * rest);
    Mat y(out, x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const Vec col = x.col(c);
        y.col(c) = apply_leading(m, col, rest);
    }
    return y;
}

Eigen::VectorXd hermitian_eigenvalues(const Mat& h) {
    if (h.rows() == 1) return Eigen::VectorXd::Constant(1, h(0, 0).real());
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConsistencyError("Hermitian eigensolver did not converge");
    return es.eigenvalues();
}

}  // namespace ssclab
