#include <algorithm>
#include <cmath>
#include <set>

#include "placement.hpp"

namespace ssclab {

namespace {

std::string fresh_name(std::string base, const std::set<std::string>& taken) {
    while (taken.count(base)) base += "'";
    return base;
}

std::set<std::string> names_of(const std::vector<Subsystem>& subs) {
    std::set<std::string> out;
    for (const auto& s : subs) out.insert(s.name);
    return out;
}

}  // namespace

LabeledState apply_channel(const QuantumChannel& ch, const LabeledState& s, const Labels& on) {
    const auto outputs = ch.output_subsystems();
    const auto p = detail::place(s, on, ch.input_dim(), outputs, "apply_channel");
    const LabeledState w = reorder(s, p.working_order).as_mixed();

    Labels out_order;
    for (const auto& o : outputs) out_order.push_back(o.name);
    for (const auto& e : ch.env_labels()) out_order.push_back(e);
    const IsometryMap iso = ch.stinespring().with_output_order(out_order);
    const auto d_out = static_cast<Eigen::Index>(total_dim(outputs));
    const auto d_env = static_cast<Eigen::Index>(total_dim(ch.env_subsystems()));

    const Mat& rho = w.density_matrix();
    const auto n_out = d_out * static_cast<Eigen::Index>(p.rest_dim);
    Mat acc = Mat::Zero(n_out, n_out);
    Mat kraus(d_out, iso.matrix().cols());
    for (Eigen::Index e = 0; e < d_env; ++e) {
        for (Eigen::Index i = 0; i < d_out; ++i) kraus.row(i) = iso.matrix().row(i * d_env + e);
        const Mat left = apply_leading(kraus, rho, p.rest_dim);
        acc += apply_leading(kraus, Mat(left.adjoint()), p.rest_dim);
    }
    std::vector<Subsystem> subs = outputs;
    subs.insert(subs.end(), p.rest.begin(), p.rest.end());
    return detail::finish(p, outputs, LabeledState::mixed_unchecked(std::move(subs), std::move(acc)));
}

QuantumChannel complementary_channel(const QuantumChannel& ch) {
    if (ch.env_labels().empty()) {
        throw ValidationError("complementary_channel: channel has no environment to hand to the receiver");
    }
    Labels env;
    for (const auto& o : ch.output_subsystems()) env.push_back(o.name);
    return QuantumChannel(ch.stinespring(), std::move(env));
}

QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner) {
    if (outer.input_dim() != inner.output_dim()) {
        throw ValidationError("compose: outer input dimension " + std::to_string(outer.input_dim()) +
                              " does not match inner output dimension " + std::to_string(inner.output_dim()));
    }
    // Rename inner environment labels that would clash with outer outputs.
    std::set<std::string> taken = names_of(outer.stinespring().outputs());
    for (const auto& o : inner.output_subsystems()) taken.insert(o.name);
    std::map<std::string, std::string> renames;
    for (const auto& e : inner.env_labels()) {
        const std::string fresh = fresh_name(e, taken);
        taken.insert(fresh);
        if (fresh != e) renames[e] = fresh;
    }
    const QuantumChannel in = renames.empty() ? inner : inner.relabeled(renames);
    const Mat& m = in.stinespring().matrix();
    const std::size_t din = in.input_dim();
    const std::string col_label = fresh_name("__col", taken);

    // Treat the inner isometry as an (unnormalized) vector over [outputs..., col].
    std::vector<Subsystem> subs = in.stinespring().outputs();
    subs.push_back({col_label, din});
    Vec v(m.rows() * m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) v(r * m.cols() + c) = m(r, c);
    }
    const LabeledState stacked = LabeledState::pure_unchecked(std::move(subs), std::move(v));

    Labels on;
    for (const auto& o : in.output_subsystems()) on.push_back(o.name);
    const LabeledState mapped = apply_isometry(outer.stinespring(), stacked, on);

    std::vector<Subsystem> outs(mapped.subsystems().begin(), mapped.subsystems().end() - 1);
    if (mapped.subsystems().back().name != col_label) throw ConsistencyError("compose: column register moved");
    const auto rows = static_cast<Eigen::Index>(total_dim(outs));
    const auto cols = static_cast<Eigen::Index>(din);
    Mat composite(rows, cols);
    const Vec& a = mapped.amplitudes();
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) composite(r, c) = a(r * cols + c);
    }
    Labels env = outer.env_labels();
    env.insert(env.end(), in.env_labels().begin(), in.env_labels().end());
    return QuantumChannel(IsometryMap(in.stinespring().inputs(), std::move(outs), std::move(composite), 1e-8),
                          std::move(env));
}

QuantumChannel identity_channel(std::size_t d, const std::string& in, const std::string& out) {
    Mat m = Mat::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const std::string env = out == "env" ? "env'" : "env";
    return QuantumChannel(IsometryMap({{in, d}}, {{out, d}, {env, 1}}, std::move(m)), {env});
}

QuantumChannel isometry_channel(const IsometryMap& iso) { return QuantumChannel(iso, {}); }

LabeledState choi(const QuantumChannel& ch) {
    std::set<std::string> taken = names_of(ch.stinespring().inputs());
    for (const auto& o : ch.stinespring().outputs()) taken.insert(o.name);
    const std::string ref = fresh_name("R", taken);
    const std::size_t d = ch.input_dim();
    std::vector<Subsystem> subs{{ref, d}};
    Labels on;
    for (const auto& s : ch.stinespring().inputs()) {
        subs.push_back(s);
        on.push_back(s.name);
    }
    Vec v = Vec::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i * d + i)) = 1.0 / std::sqrt(static_cast<double>(d));
    return apply_channel(ch, LabeledState::pure_unchecked(std::move(subs), std::move(v)), on);
}

double choi_distance(const QuantumChannel& a, const QuantumChannel& b) {
    if (a.input_dim() != b.input_dim() || a.output_dim() != b.output_dim()) {
        throw ValidationError("choi_distance: channels differ in input or output dimension");
    }
    return trace_distance(choi(a).density_matrix(), choi(b).density_matrix());
}

}  // namespace ssclab
