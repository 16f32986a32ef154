#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>

#include "ssclab/qcore.hpp"
#include "ssclab/simd.hpp"

namespace ssclab {

namespace {

std::vector<std::size_t> positions_of(const LabeledState& s, const Labels& order) {
    std::vector<std::size_t> perm;
    perm.reserve(order.size());
    for (const auto& name : order) perm.push_back(s.position(name));
    return perm;
}

bool is_identity(const std::vector<std::size_t>& perm) {
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] != i) return false;
    }
    return true;
}

void check_label_set(const LabeledState& s, const Labels& names, const char* what) {
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!s.has(n)) throw ValidationError(std::string(what) + ": unknown label '" + n + "'", n);
        if (!seen.insert(n).second) throw ValidationError(std::string(what) + ": repeated label '" + n + "'", n);
    }
}

// Reduced density of a pure vector laid out [keep, discard] row-major.
Mat gram_rows(const cplx* data, std::size_t rows, std::size_t len) {
    Mat rho(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const cplx v = simd::dotc(data + i * len, data + j * len, len);
            rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(v);
        }
    }
    return rho;
}

}  // namespace

LabeledState tensor(const LabeledState& s1, const LabeledState& s2) {
    for (const auto& sub : s2.subsystems()) {
        if (s1.has(sub.name)) throw ValidationError("tensor: label collision on '" + sub.name + "'", sub.name);
    }
    std::vector<Subsystem> subs = s1.subsystems();
    subs.insert(subs.end(), s2.subsystems().begin(), s2.subsystems().end());
    if (s1.is_pure() && s2.is_pure()) {
        const Vec& a = s1.amplitudes();
        const Vec& b = s2.amplitudes();
        Vec out(a.size() * b.size());
        for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
        return LabeledState::pure_unchecked(std::move(subs), std::move(out));
    }
    const Mat a = s1.density();
    const Mat b = s2.density();
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return LabeledState::mixed_unchecked(std::move(subs), std::move(out));
}

LabeledState reorder(const LabeledState& s, const Labels& order) {
    if (order.size() != s.subsystems().size()) throw ValidationError("reorder: order is not a permutation of the labels");
    check_label_set(s, order, "reorder");
    const auto perm = positions_of(s, order);
    if (is_identity(perm)) return s;

    std::vector<Subsystem> subs;
    for (auto p : perm) subs.push_back(s.subsystems()[p]);
    const auto dims = dims_of(s.subsystems());
    const auto src = permutation_map(dims, perm);
    const auto n = static_cast<Eigen::Index>(src.size());

    if (s.is_pure()) {
        const Vec& a = s.amplitudes();
        Vec out(n);
        for (Eigen::Index i = 0; i < n; ++i) out(i) = a(static_cast<Eigen::Index>(src[i]));
        return LabeledState::pure_unchecked(std::move(subs), std::move(out));
    }
    const Mat& rho = s.density_matrix();
    Mat out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto sj = static_cast<Eigen::Index>(src[j]);
        for (Eigen::Index i = 0; i < n; ++i) out(i, j) = rho(static_cast<Eigen::Index>(src[i]), sj);
    }
    return LabeledState::mixed_unchecked(std::move(subs), std::move(out));
}

LabeledState partial_trace(const LabeledState& s, const Labels& discard) {
    check_label_set(s, discard, "partial_trace");
    if (discard.size() >= s.subsystems().size()) {
        throw ValidationError("partial_trace: cannot discard every subsystem");
    }
    Labels keep;
    std::vector<Subsystem> keep_subs;
    for (const auto& sub : s.subsystems()) {
        if (std::find(discard.begin(), discard.end(), sub.name) == discard.end()) {
            keep.push_back(sub.name);
            keep_subs.push_back(sub);
        }
    }
    if (discard.empty()) return s.as_mixed();
    const std::size_t dk = total_dim(keep_subs);
    const std::size_t dd = s.dim() / dk;

    if (s.is_pure()) {
        Labels order = keep;
        order.insert(order.end(), discard.begin(), discard.end());
        const LabeledState r = reorder(s, order);
        return LabeledState::mixed_unchecked(std::move(keep_subs), gram_rows(r.amplitudes().data(), dk, dd));
    }

    // Mixed: discarded subsystems leading, so each diagonal block is contiguous per column.
    Labels order = discard;
    order.insert(order.end(), keep.begin(), keep.end());
    const LabeledState r = reorder(s, order);
    const Mat& rho = r.density_matrix();
    Mat out = Mat::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t k = 0; k < dd; ++k) {
        const auto off = static_cast<Eigen::Index>(k * dk);
        for (std::size_t j = 0; j < dk; ++j) {
            const auto col = off + static_cast<Eigen::Index>(j);
            simd::axpy(cplx(1.0), &rho(off, col), &out(0, static_cast<Eigen::Index>(j)), dk);
        }
    }
    return LabeledState::mixed_unchecked(std::move(keep_subs), std::move(out));
}

LabeledState reduce_to(const LabeledState& s, const Labels& keep) {
    if (keep.empty()) throw ValidationError("reduce_to: empty subsystem set");
    check_label_set(s, keep, "reduce_to");
    Labels discard;
    for (const auto& sub : s.subsystems()) {
        if (std::find(keep.begin(), keep.end(), sub.name) == keep.end()) discard.push_back(sub.name);
    }
    return partial_trace(s, discard);
}

LabeledState purify(const LabeledState& rho, const Subsystem& env) {
    if (rho.has(env.name)) throw ValidationError("purify: environment label '" + env.name + "' already in use", env.name);
    if (env.dim < 1) throw ValidationError("purify: environment dimension must be positive");
    const Mat m = rho.density();
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) throw ConsistencyError("purify: eigensolver failed");

    const auto n = static_cast<std::size_t>(m.rows());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& evals = es.eigenvalues();
    // Eigen returns ascending order; the stable sort keeps solver order among ties.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return evals(static_cast<Eigen::Index>(a)) > evals(static_cast<Eigen::Index>(b));
    });

    std::size_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = evals(static_cast<Eigen::Index>(i));
        if (lam < -kStateTol) throw ValidationError("purify: input has a negative eigenvalue");
        if (lam > kStateTol) ++rank;
    }
    if (env.dim < rank) {
        throw ValidationError("purify: environment dimension " + std::to_string(env.dim) + " below rank " +
                              std::to_string(rank));
    }

    Vec psi = Vec::Zero(static_cast<Eigen::Index>(n * env.dim));
    const std::size_t terms = std::min(env.dim, n);
    for (std::size_t k = 0; k < terms; ++k) {
        const double lam = evals(static_cast<Eigen::Index>(order[k]));
        if (lam <= 0.0) break;
        Vec v = es.eigenvectors().col(static_cast<Eigen::Index>(order[k]));
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (std::abs(v(i)) > 1e-12) {
                v *= std::conj(v(i)) / std::abs(v(i));
                break;
            }
        }
        const double amp = std::sqrt(lam);
        for (std::size_t i = 0; i < n; ++i) psi(static_cast<Eigen::Index>(i * env.dim + k)) = amp * v(static_cast<Eigen::Index>(i));
    }
    psi /= psi.norm();
    auto subs = rho.subsystems();
    subs.push_back(env);
    return LabeledState::pure_unchecked(std::move(subs), std::move(psi));
}

double trace_distance(const Mat& rho1, const Mat& rho2) {
    if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols()) {
        throw ValidationError("trace_distance: shape mismatch");
    }
    const Mat diff = rho1 - rho2;
    const Mat herm = 0.5 * (diff + diff.adjoint());
    return 0.5 * hermitian_eigenvalues(herm).cwiseAbs().sum();
}

double trace_distance(const LabeledState& s1, const LabeledState& s2) {
    if (s1.subsystems() != s2.subsystems()) throw ValidationError("trace_distance: subsystem structure differs");
    if (s1.is_pure() && s2.is_pure()) {
        // sqrt(1 - |<u|v>|^2) is the norm of the part of u orthogonal to v
        const Vec u = s1.amplitudes().normalized(), v = s2.amplitudes().normalized();
        return std::min(1.0, (u - v * v.dot(u)).norm());
    }
    return std::min(1.0, trace_distance(s1.density(), s2.density()));
}

LabeledState basis_state(const std::vector<Subsystem>& subsystems, std::size_t index) {
    const std::size_t d = total_dim(subsystems);
    if (index >= d) throw ValidationError("basis_state: index out of range");
    Vec v = Vec::Zero(static_cast<Eigen::Index>(d));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return LabeledState::pure(subsystems, std::move(v));
}

LabeledState maximally_entangled(std::size_t d, const std::string& a, const std::string& b) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i * d + i)) = 1.0 / std::sqrt(static_cast<double>(d));
    return LabeledState::pure({{a, d}, {b, d}}, std::move(v));
}

LabeledState maximally_mixed(const std::vector<Subsystem>& subsystems) {
    const auto d = static_cast<Eigen::Index>(total_dim(subsystems));
    return LabeledState::mixed(subsystems, Mat::Identity(d, d) / static_cast<double>(d));
}

}  // namespace ssclab
