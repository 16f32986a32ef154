#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ssclab/entropics.hpp"
#include "ssclab/protocols.hpp"

namespace ssclab {

namespace {

Labels concat(Labels a, const Labels& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Labels suffixed(const Labels& l, std::size_t i) {
    Labels out;
    for (const auto& n : l) out.push_back(n + "#" + std::to_string(i));
    return out;
}

}  // namespace

WmiRunReport wmi_lower_bound_protocol(const LabeledState& psi_in, const Parties& parties, const Instrument& inst,
                                      std::size_t n, double epsilon, std::uint64_t seed) {
    validate_instrument(inst);
    if (n < 1) throw ValidationError("wmi_lower_bound_protocol: n must be positive", "n");
    Parties q = parties;
    const LabeledState psi = prepare_pure(psi_in, q);
    const std::size_t dA = psi.dim_of(q.alice);
    if (inst.input_dim() != dA) throw ValidationError("instrument input dimension does not match Alice's dimension", "instrument");

    WmiRunReport rep;
    rep.n = n;
    rep.epsilon = epsilon;
    rep.seed = seed;
    rep.single_copy_G = eval_G(psi, q, inst);

    // One copy of sum_k sqrt(p_k) (K_k (x) 1)|psi> |k>_alpha |k>_alphabar |k>_X with the Kraus index in J.
    const Labels rest_labels = concat(q.bob, q.eve);
    const LabeledState w = reorder(psi, concat(q.alice, rest_labels));
    const std::size_t rest = w.dim() / dA;
    const std::size_t da = inst.output_dim();
    std::size_t J = 1;
    for (const auto& br : inst.branches) J = std::max(J, br.kraus.size());
    const std::size_t K = inst.branches.size();
    const auto body = static_cast<Eigen::Index>(J * da * rest);
    Vec one = Vec::Zero(body * static_cast<Eigen::Index>(K * K * K));
    for (std::size_t k = 0; k < K; ++k) {
        const auto& br = inst.branches[k];
        Mat stack = Mat::Zero(static_cast<Eigen::Index>(J * da), static_cast<Eigen::Index>(dA));
        for (std::size_t j = 0; j < br.kraus.size(); ++j) {
            stack.middleRows(static_cast<Eigen::Index>(j * da), static_cast<Eigen::Index>(da)) = br.kraus[j];
        }
        const Vec y = std::sqrt(br.weight) * apply_leading(stack, w.amplitudes(), rest);
        const auto flag = static_cast<Eigen::Index>((k * K + k) * K + k);
        const auto stride = static_cast<Eigen::Index>(K * K * K);
        for (Eigen::Index i = 0; i < body; ++i) one(i * stride + flag) = y(i);
    }
    std::vector<Subsystem> subs{{"J", J}, {"a", da}};
    for (const auto& l : rest_labels) subs.push_back({l, psi.dim_of(l)});
    subs.push_back({"alpha", K});
    subs.push_back({"alphabar", K});
    subs.push_back({"X", K});
    // Internal names cannot clash: party labels are renamed per copy below.
    std::map<std::string, std::string> to_internal;
    for (std::size_t i = 0; i < rest_labels.size(); ++i) {
        subs[i + 2].name = "r" + std::to_string(i);
        to_internal[rest_labels[i]] = subs[i + 2].name;
    }
    const LabeledState phi1 = LabeledState::pure_unchecked(subs, one);
    Labels bob1, eve1;
    for (const auto& l : q.bob) bob1.push_back(to_internal[l]);
    for (const auto& l : q.eve) eve1.push_back(to_internal[l]);

    const double ie = mutual_information(phi1, {"a"}, concat(eve1, {"alphabar"}));

    // Spectrum of a for the typical projection.
    const Mat rho_a = reduce_to(phi1, {"a"}).density_matrix();
    Eigen::SelfAdjointEigenSolver<Mat> es(rho_a);
    std::vector<double> lambda;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) lambda.push_back(std::max(0.0, es.eigenvalues()(i)));
    const IsometryMap to_eigen({{"a", da}}, {{"a", da}}, es.eigenvectors().adjoint(), 1e-8);

    if (std::pow(static_cast<double>(phi1.dim()), static_cast<double>(n)) > static_cast<double>(1u << 22)) {
        throw ValidationError("wmi_lower_bound_protocol: n copies exceed the supported dimension", "n");
    }
    LabeledState all = phi1.relabeled([&] {
        std::map<std::string, std::string> m;
        for (const auto& l : phi1.labels()) m[l] = l + "#0";
        return m;
    }());
    all = apply_isometry(to_eigen.relabeled({{"a", "a#0"}}), all, {"a#0"});
    for (std::size_t i = 1; i < n; ++i) {
        std::map<std::string, std::string> m;
        for (const auto& l : phi1.labels()) m[l] = l + "#" + std::to_string(i);
        LabeledState c = apply_isometry(to_eigen.relabeled({{"a", "a#" + std::to_string(i)}}), phi1.relabeled(m),
                                        {"a#" + std::to_string(i)});
        all = tensor(all, c);
    }

    Labels a_n, b_n, e_n, other;
    for (std::size_t i = 0; i < n; ++i) {
        a_n.push_back("a#" + std::to_string(i));
        for (const auto& l : suffixed(concat(bob1, {"alpha"}), i)) b_n.push_back(l);
        for (const auto& l : suffixed(concat(eve1, {"alphabar"}), i)) e_n.push_back(l);
        for (const auto& l : suffixed({"J", "X"}, i)) other.push_back(l);
    }
    const LabeledState ordered = reorder(all, concat(concat(concat(a_n, b_n), e_n), other));

    const TypicalSet t = typical_set(lambda, n, epsilon);
    if (t.indices.empty()) throw ValidationError("wmi_lower_bound_protocol: typical subspace is empty", "epsilon");
    const std::size_t tail = ordered.dim() / ordered.dim_of(a_n);
    const auto nT = static_cast<Eigen::Index>(t.indices.size());
    Vec proj(nT * static_cast<Eigen::Index>(tail));
    for (Eigen::Index r = 0; r < nT; ++r) {
        proj.segment(r * static_cast<Eigen::Index>(tail), static_cast<Eigen::Index>(tail)) =
            ordered.amplitudes().segment(static_cast<Eigen::Index>(t.indices[static_cast<std::size_t>(r)] * tail),
                                         static_cast<Eigen::Index>(tail));
    }
    rep.typical_mass = proj.squaredNorm();
    rep.typical_dim = t.indices.size();
    if (rep.typical_mass < 1e-14) throw ValidationError("wmi_lower_bound_protocol: typical projection has no weight", "epsilon");
    proj /= std::sqrt(rep.typical_mass);

    std::vector<Subsystem> psubs{{"atyp", t.indices.size()}};
    for (std::size_t i = a_n.size(); i < ordered.subsystems().size(); ++i) psubs.push_back(ordered.subsystems()[i]);
    const LabeledState projected = LabeledState::pure_unchecked(psubs, proj);

    const double T = static_cast<double>(t.indices.size());
    rep.dim_a2 = static_cast<std::size_t>(std::clamp(std::round(std::pow(2.0, 0.5 * static_cast<double>(n) * ie)), 1.0, T));
    rep.dim_a1 = (t.indices.size() + rep.dim_a2 - 1) / rep.dim_a2;
    const IsometryMap split({{"atyp", t.indices.size()}}, {{"a1", rep.dim_a1}, {"a2", rep.dim_a2}},
                            random_isometry_matrix(t.indices.size(), rep.dim_a1 * rep.dim_a2, seed), 1e-9);
    const LabeledState fin = apply_isometry(split, projected, {"atyp"});

    rep.rate = mutual_information(fin, {"a1"}, b_n) / (2.0 * static_cast<double>(n));
    rep.residual_mi = mutual_information(fin, {"a1"}, e_n);
    if (rep.dim_a1 * fin.dim_of(e_n) <= 1024) {
        const Labels ae = concat({"a1"}, e_n);
        const LabeledState joint = reorder(reduce_to(fin, ae), ae);
        const LabeledState prod = tensor(reduce_to(fin, {"a1"}), reorder(reduce_to(fin, e_n), e_n));
        rep.residual_distance = trace_distance(joint.density(), prod.density());
    }
    rep.deficit = rep.single_copy_G - rep.rate;
    return rep;
}

json to_json(const WmiRunReport& r) {
    return {{"n", r.n},
            {"rate", r.rate},
            {"residual_mi", r.residual_mi},
            {"residual_distance", r.residual_distance},
            {"single_copy_G", r.single_copy_G},
            {"deficit", r.deficit},
            {"typical_mass", r.typical_mass},
            {"typical_dim", r.typical_dim},
            {"dimA1", r.dim_a1},
            {"dimA2", r.dim_a2},
            {"epsilon", r.epsilon},
            {"seed", r.seed}};
}

}  // namespace ssclab
