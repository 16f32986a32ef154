#include <algorithm>
#include <random>
#include <set>

#include <Eigen/QR>

#include "placement.hpp"

namespace ssclab {

namespace detail {

Placement place(const LabeledState& s, const Labels& on, std::size_t expected_dim,
                const std::vector<Subsystem>& outputs, const char* what) {
    if (on.empty()) throw ValidationError(std::string(what) + ": empty target label set");
    std::set<std::string> on_set;
    for (const auto& n : on) {
        if (!s.has(n)) throw ValidationError(std::string(what) + ": unknown label '" + n + "'", n);
        if (!on_set.insert(n).second) throw ValidationError(std::string(what) + ": repeated label '" + n + "'", n);
    }
    if (s.dim_of(on) != expected_dim) {
        throw ValidationError(std::string(what) + ": target dimension " + std::to_string(s.dim_of(on)) +
                              " does not match input dimension " + std::to_string(expected_dim));
    }
    Placement p;
    p.working_order = on;
    bool seen_first = false;
    for (const auto& sub : s.subsystems()) {
        if (on_set.count(sub.name)) {
            if (!seen_first) {
                p.insert_at = p.rest.size();
                seen_first = true;
            }
            continue;
        }
        p.rest.push_back(sub);
        p.working_order.push_back(sub.name);
        p.rest_dim *= sub.dim;
    }
    for (const auto& o : outputs) {
        for (const auto& r : p.rest) {
            if (r.name == o.name) {
                throw ValidationError(std::string(what) + ": output label '" + o.name + "' collides with a spectator", o.name);
            }
        }
    }
    return p;
}

LabeledState finish(const Placement& p, const std::vector<Subsystem>& outputs, LabeledState working) {
    Labels final_order;
    for (std::size_t i = 0; i <= p.rest.size(); ++i) {
        if (i == p.insert_at) {
            for (const auto& o : outputs) final_order.push_back(o.name);
        }
        if (i < p.rest.size()) final_order.push_back(p.rest[i].name);
    }
    return reorder(working, final_order);
}

}  // namespace detail

LabeledState apply_isometry(const IsometryMap& iso, const LabeledState& s, const Labels& on) {
    const auto p = detail::place(s, on, iso.input_dim(), iso.outputs(), "apply_isometry");
    const LabeledState w = reorder(s, p.working_order);
    std::vector<Subsystem> subs = iso.outputs();
    subs.insert(subs.end(), p.rest.begin(), p.rest.end());
    if (w.is_pure()) {
        Vec out = apply_leading(iso.matrix(), w.amplitudes(), p.rest_dim);
        return detail::finish(p, iso.outputs(), LabeledState::pure_unchecked(std::move(subs), std::move(out)));
    }
    const Mat left = apply_leading(iso.matrix(), w.density_matrix(), p.rest_dim);
    const Mat both = apply_leading(iso.matrix(), Mat(left.adjoint()), p.rest_dim);
    return detail::finish(p, iso.outputs(), LabeledState::mixed_unchecked(std::move(subs), both));
}

Mat random_isometry_matrix(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed) {
    if (in_dim < 1) throw ValidationError("random_isometry: input dimension must be positive");
    if (out_dim < in_dim) throw ValidationError("random_isometry: output dimension smaller than input dimension");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto rows = static_cast<Eigen::Index>(out_dim);
    const auto cols = static_cast<Eigen::Index>(in_dim);
    Mat g(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(r, c) = cplx(re, im);
        }
    }
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(rows, cols);
    const Mat& r = qr.matrixQR();
    // Fix the phase freedom of QR so the result is Haar distributed.
    for (Eigen::Index c = 0; c < cols; ++c) {
        const cplx d = r(c, c);
        if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
    }
    return q;
}

IsometryMap random_isometry(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed) {
    return IsometryMap({{"in", in_dim}}, {{"out", out_dim}}, random_isometry_matrix(in_dim, out_dim, seed));
}

LabeledState random_pure_state(const std::vector<Subsystem>& subsystems, std::uint64_t seed) {
    return LabeledState::pure(subsystems, random_isometry_matrix(1, total_dim(subsystems), seed).col(0));
}

}  // namespace ssclab
