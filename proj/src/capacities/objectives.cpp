#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "ssclab/channels.hpp"
#include "ssclab/entropics.hpp"

namespace ssclab {

using detail::concat;

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool contains(const Labels& l, const std::string& n) { return std::find(l.begin(), l.end(), n) != l.end(); }

std::vector<Subsystem> subsystems_for(const LabeledState& s, const Labels& labels) {
    std::vector<Subsystem> out;
    for (const auto& n : labels) out.push_back(s.subsystems()[s.position(n)]);
    return out;
}

std::vector<std::string> output_names(const SplittingCertificate& split) {
    std::vector<std::string> out;
    for (const auto& o : split.isometry.outputs()) out.push_back(o.name);
    return out;
}

}  // namespace

Parties infer_parties(const LabeledState& s, const Labels& alice, const Labels& bob) {
    for (const auto& n : concat(alice, bob)) {
        if (!s.has(n)) throw ValidationError("unknown party label '" + n + "'", n);
    }
    Parties p;
    for (const auto& n : s.labels()) {
        const bool bob_like = n == "B" || ends_with(n, "_B");
        const bool eve_like = n == "E" || ends_with(n, "_E");
        if (contains(alice, n)) {
            p.alice.push_back(n);
        } else if (contains(bob, n)) {
            p.bob.push_back(n);
        } else if (eve_like) {
            p.eve.push_back(n);
        } else if (bob_like) {
            (bob.empty() ? p.bob : p.eve).push_back(n);
        } else {
            (alice.empty() ? p.alice : p.eve).push_back(n);
        }
    }
    return p;
}

LabeledState prepare_pure(const LabeledState& s, Parties& parties) {
    std::set<std::string> seen;
    for (const auto* group : {&parties.alice, &parties.bob, &parties.eve}) {
        for (const auto& n : *group) {
            if (!s.has(n)) throw ValidationError("party label '" + n + "' is not a subsystem", n);
            if (!seen.insert(n).second) throw ValidationError("label '" + n + "' assigned to two parties", n);
        }
    }
    if (seen.size() != s.subsystems().size()) throw ValidationError("every subsystem must belong to a party");
    if (parties.alice.empty()) throw ValidationError("Alice holds no subsystem");
    if (s.is_pure()) return s;
    const std::string env = detail::fresh_label("E", detail::label_set(s));
    const LabeledState pure = purify(s, {env, s.dim()});
    parties.eve.push_back(env);
    return pure;
}

std::vector<std::size_t> SplittingCertificate::dims() const { return dims_of(isometry.outputs()); }

namespace detail {

LabeledState apply_split(const LabeledState& psi, const Parties& p, const SplittingCertificate& split) {
    if (split.isometry.input_dim() != psi.dim_of(p.alice)) {
        throw ValidationError("splitting input dimension " + std::to_string(split.isometry.input_dim()) +
                              " does not match Alice's dimension " + std::to_string(psi.dim_of(p.alice)));
    }
    return apply_isometry(split.isometry, psi, p.alice);
}

}  // namespace detail

SplittingCertificate split_from_matrix(const LabeledState& s, const Parties& p, const Mat& m,
                                       const std::vector<std::size_t>& out_dims) {
    static const char* names[] = {"a", "alpha", "alpha2"};
    if (out_dims.size() < 2 || out_dims.size() > 3) throw ValidationError("a splitting has two or three outputs");
    std::set<std::string> taken;
    for (const auto& n : concat(p.bob, p.eve)) taken.insert(n);
    std::vector<Subsystem> outs;
    for (std::size_t i = 0; i < out_dims.size(); ++i) {
        std::string base = names[i];
        if (out_dims.size() == 3 && i == 1) base = "alpha1";
        const std::string n = detail::fresh_label(base, taken);
        taken.insert(n);
        outs.push_back({n, out_dims[i]});
    }
    return {IsometryMap(subsystems_for(s, p.alice), std::move(outs), m, 1e-9)};
}

SplittingCertificate natural_split(const LabeledState& s, const Parties& p, const Labels& a_labels) {
    for (const auto& n : a_labels) {
        if (!contains(p.alice, n)) throw ValidationError("split label '" + n + "' is not one of Alice's registers", n);
    }
    if (a_labels.empty()) throw ValidationError("split needs at least one register for a");
    Labels rest;
    for (const auto& n : p.alice) {
        if (!contains(a_labels, n)) rest.push_back(n);
    }
    // Row permutation taking Alice's order to [a_labels, rest].
    const auto alice_subs = subsystems_for(s, p.alice);
    const Labels target = concat(a_labels, rest);
    std::vector<std::size_t> perm;
    for (const auto& n : target) perm.push_back(static_cast<std::size_t>(std::find(p.alice.begin(), p.alice.end(), n) - p.alice.begin()));
    const auto src = permutation_map(dims_of(alice_subs), perm);
    const auto d = static_cast<Eigen::Index>(src.size());
    Mat m = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, static_cast<Eigen::Index>(src[static_cast<std::size_t>(i)])) = 1.0;
    const std::size_t da = s.dim_of(a_labels);
    return split_from_matrix(s, p, m, {da, static_cast<std::size_t>(d) / da});
}

double eval_zero_way_wmi(const LabeledState& psi, const Parties& p, const SplittingCertificate& split) {
    const auto [pure, q] = detail::ensure_pure(psi, p);
    const LabeledState phi = detail::apply_split(pure, q, split);
    const Labels a{output_names(split)[0]};
    return 0.5 * (mutual_information(phi, a, q.bob) - mutual_information(phi, a, q.eve));
}

namespace {

struct ErasedState {
    LabeledState state;
    std::string a, alpha, b, e;
};

ErasedState erase_alpha(const LabeledState& phi, const SplittingCertificate& split, const std::set<std::string>& taken_in) {
    const auto names = output_names(split);
    std::set<std::string> taken = taken_in;
    for (const auto& n : phi.labels()) taken.insert(n);
    const std::string b = detail::fresh_label("b", taken);
    taken.insert(b);
    const std::string e = detail::fresh_label("e", taken);
    const std::size_t da = phi.dim_of(names[1]);
    const IsometryMap iso({{names[1], da}}, {{b, da + 1}, {e, da + 1}}, erasure_isometry_matrix(da));
    return {apply_isometry(iso, phi, {names[1]}), names[0], names[1], b, e};
}

}  // namespace

double eval_erasure_coherent(const LabeledState& psi, const Parties& p, const SplittingCertificate& split) {
    const auto [pure, q] = detail::ensure_pure(psi, p);
    if (split.isometry.outputs().size() != 2) throw ValidationError("erasure objective needs a two-output splitting");
    const LabeledState phi = detail::apply_split(pure, q, split);
    const auto er = erase_alpha(phi, split, {});
    return coherent_information(er.state, {er.a}, concat(q.bob, {er.b}));
}

PropositionCheck proposition_identity_check(const LabeledState& psi, const Parties& p, const SplittingCertificate& split) {
    const auto [pure, q] = detail::ensure_pure(psi, p);
    if (split.isometry.outputs().size() != 2) throw ValidationError("proposition check needs a two-output splitting");
    const LabeledState phi = detail::apply_split(pure, q, split);
    const auto names = output_names(split);
    const Labels a{names[0]}, alpha{names[1]};
    PropositionCheck c;
    const auto er = erase_alpha(phi, split, {});
    c.lhs = coherent_information(er.state, a, concat(q.bob, {er.b}));
    c.mid = 0.5 * coherent_information(phi, a, concat(q.bob, alpha)) + 0.5 * coherent_information(phi, a, q.bob);
    c.rhs = 0.5 * (mutual_information(phi, a, q.bob) - mutual_information(phi, a, q.eve));
    c.max_gap = std::max({std::abs(c.lhs - c.mid), std::abs(c.mid - c.rhs), std::abs(c.lhs - c.rhs)});
    return c;
}

Mat ss_embedding(std::size_t alpha_dim, std::size_t d) {
    const std::size_t n = d * (d + 1) / 2;
    if (alpha_dim > n) {
        throw ValidationError("alpha dimension " + std::to_string(alpha_dim) + " exceeds the symmetric-side input " +
                              std::to_string(n));
    }
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i + 1 < d; ++i) order.push_back(ss_pair_index(i, d - 1, d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            if (j == d - 1 && i + 1 < d) continue;
            order.push_back(ss_pair_index(i, j, d));
        }
    }
    Mat m = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(alpha_dim));
    for (std::size_t k = 0; k < alpha_dim; ++k) m(static_cast<Eigen::Index>(order[k]), static_cast<Eigen::Index>(k)) = 1.0;
    return m;
}

double eval_ss_assisted(const LabeledState& psi, const Parties& p, const SplittingCertificate& split, std::size_t ss_dim) {
    const auto [pure, q] = detail::ensure_pure(psi, p);
    if (split.isometry.outputs().size() != 2) throw ValidationError("ss-assisted objective needs a two-output splitting");
    const LabeledState phi = detail::apply_split(pure, q, split);
    const auto names = output_names(split);
    const std::size_t da = phi.dim_of(names[1]);
    const std::size_t d = ss_dim == 0 ? da + 1 : ss_dim;
    if (d < 2) throw ValidationError("symmetric-side dimension must be at least 2", "ss_dim");
    std::set<std::string> taken = detail::label_set(phi);
    const std::string ab = detail::fresh_label("alpha_B", taken);
    taken.insert(ab);
    const std::string ae = detail::fresh_label("alpha_E", taken);
    const IsometryMap iso({{names[1], da}}, {{ab, d}, {ae, d}}, ss_isometry_matrix(d) * ss_embedding(da, d), 1e-9);
    const LabeledState out = apply_isometry(iso, phi, {names[1]});
    const Labels a{names[0]};
    return 0.5 * (conditional_mutual_information(out, a, q.bob, {ab}) - conditional_mutual_information(out, a, q.eve, {ae}));
}

double eval_G(const LabeledState& psi, const Parties& p, const Instrument& inst) {
    validate_instrument(inst);
    const auto [pure, q] = detail::ensure_pure(psi, p);
    const std::size_t dA = pure.dim_of(q.alice);
    if (inst.input_dim() != dA) {
        throw ValidationError("instrument input dimension " + std::to_string(inst.input_dim()) +
                              " does not match Alice's dimension " + std::to_string(dA));
    }
    const Labels rest_labels = concat(q.bob, q.eve);
    const LabeledState w = reorder(pure, concat(q.alice, rest_labels));
    const std::size_t rest = w.dim() / dA;
    const std::size_t da = inst.output_dim();
    std::set<std::string> taken = detail::label_set(pure);
    const std::string a = detail::fresh_label("a", taken);
    taken.insert(a);
    const std::string j = detail::fresh_label("kraus", taken);
    auto rest_subs = subsystems_for(w, rest_labels);

    double value = 0.0;
    for (const auto& br : inst.branches) {
        if (br.weight <= 0.0) continue;
        const auto m = static_cast<Eigen::Index>(br.kraus.size());
        Mat stack(m * static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(dA));
        for (Eigen::Index k = 0; k < m; ++k) stack.middleRows(k * static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da)) = br.kraus[static_cast<std::size_t>(k)];
        Vec y = apply_leading(stack, w.amplitudes(), rest);
        const double norm2 = y.squaredNorm();
        const double qk = br.weight * norm2;
        if (qk < 1e-15) continue;
        y /= std::sqrt(norm2);
        std::vector<Subsystem> subs{{j, static_cast<std::size_t>(m)}, {a, da}};
        subs.insert(subs.end(), rest_subs.begin(), rest_subs.end());
        const LabeledState branch = LabeledState::pure_unchecked(std::move(subs), std::move(y));
        value += qk * 0.5 * (mutual_information(branch, {a}, q.bob) - mutual_information(branch, {a}, q.eve));
    }
    return value;
}

double eval_G_general(const QuantumChannel& lambda, const LabeledState& psi, const Parties& p, const SplittingCertificate& split) {
    const auto [pure, q] = detail::ensure_pure(psi, p);
    if (split.isometry.outputs().size() != 3) throw ValidationError("generalized objective needs a three-output splitting");
    const LabeledState phi = detail::apply_split(pure, q, split);
    const auto names = output_names(split);
    if (phi.dim_of(names[1]) != lambda.input_dim()) {
        throw ValidationError("alpha1 dimension " + std::to_string(phi.dim_of(names[1])) +
                              " does not match the channel input " + std::to_string(lambda.input_dim()));
    }
    // Relabel the channel's outputs so they cannot collide with the state.
    std::set<std::string> taken = detail::label_set(phi);
    std::map<std::string, std::string> renames;
    Labels lam_b, lam_e;
    for (const auto& o : lambda.stinespring().outputs()) {
        const std::string n = detail::fresh_label((lambda.is_env(o.name) ? "lam_E:" : "lam_B:") + o.name, taken);
        taken.insert(n);
        renames[o.name] = n;
        (lambda.is_env(o.name) ? lam_e : lam_b).push_back(n);
    }
    const IsometryMap renamed = lambda.stinespring().relabeled(renames);
    const IsometryMap iso({{names[1], lambda.input_dim()}}, renamed.outputs(), renamed.matrix(), 1e-9);
    const LabeledState out = apply_isometry(iso, phi, {names[1]});
    const Labels a{names[0]};
    return 0.5 * (mutual_information(out, a, concat(lam_b, q.bob)) - mutual_information(out, a, concat(lam_e, q.eve)));
}

}  // namespace ssclab
