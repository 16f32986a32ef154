#include <algorithm>

#include "ssclab/channels.hpp"
#include "ssclab/protocols.hpp"

namespace ssclab {

namespace {

Labels concat(Labels a, const Labels& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string fresh(std::string base, const LabeledState& s) {
    while (s.has(base)) base += "'";
    return base;
}

}  // namespace

double decoupling_deviation(const LabeledState& psi, const Labels& a, const Labels& eve) {
    if (eve.empty()) return 0.0;
    const LabeledState ae = reorder(reduce_to(psi, concat(a, eve)), concat(a, eve));
    const LabeledState prod = tensor(reorder(reduce_to(psi, a), a), reorder(reduce_to(psi, eve), eve));
    return trace_distance(ae.density(), prod.density());
}

PerfectWmiResult perfect_wmi_isometry(const LabeledState& psi_in, const Labels& a, const Labels& alpha, const Labels& bob,
                                      const Labels& eve_in, double tol_in) {
    if (a.empty()) throw ValidationError("perfect_wmi_isometry: a is empty", "a");
    const Labels holders = concat(alpha, bob);
    if (holders.empty()) throw ValidationError("perfect_wmi_isometry: alpha B is empty", "bob");
    LabeledState psi = psi_in;
    Labels eve = eve_in;
    if (concat(concat(a, holders), eve).size() != psi.subsystems().size()) {
        throw ValidationError("perfect_wmi_isometry: a, alpha, B and E must cover every subsystem");
    }
    if (!psi.is_pure()) {
        const std::string env = fresh("E", psi);
        psi = purify(psi, {env, psi.dim()});
        eve.push_back(env);
    }
    if (eve.empty()) {
        const std::string env = fresh("E", psi);
        psi = tensor(psi, basis_state({{env, 1}}, 0));
        eve.push_back(env);
    }

    PerfectWmiResult res{IsometryMap({{"x", 1}}, {{"y", 1}}, Mat::Identity(1, 1)), 0.0, 0.0, 0.0};
    res.deviation = decoupling_deviation(psi, a, eve);
    if (res.deviation > tol_in) {
        throw ValidationError("perfect_wmi_isometry: a and E are correlated, deviation " + std::to_string(res.deviation) +
                                  " exceeds tolerance " + std::to_string(tol_in),
                              "psi");
    }
    const std::size_t da = psi.dim_of(a), de = psi.dim_of(eve), dh = psi.dim_of(holders);
    const std::string abar = fresh("abar", psi);
    std::string ebar = fresh("ebar", psi);
    const std::size_t de_bar = std::max(de, (dh + da - 1) / da);

    const LabeledState phi_a = purify(reorder(reduce_to(psi, a), a), {abar, da});
    const LabeledState chi_e = purify(reorder(reduce_to(psi, eve), eve), {ebar, de_bar});
    const Labels ref = concat(a, eve);
    const LabeledState target = reorder(tensor(phi_a, chi_e), concat(ref, {abar, ebar}));
    const LabeledState source = reorder(psi, concat(ref, holders));

    const Mat w = relate_purifications(source.amplitudes(), dh, target.amplitudes(), da * de_bar, da * de);
    std::vector<Subsystem> ins;
    for (const auto& n : holders) ins.push_back({n, psi.dim_of(n)});
    res.U = IsometryMap(std::move(ins), {{abar, da}, {ebar, de_bar}}, w, 1e-8);
    res.unitarity = (w.adjoint() * w - Mat::Identity(w.cols(), w.cols())).cwiseAbs().maxCoeff();
    const LabeledState mapped = apply_isometry(res.U, source, holders);
    res.residual = trace_distance(mapped, target);
    return res;
}

LabeledState decoupled_instance(std::size_t da, std::size_t dalpha, std::size_t db, std::size_t de, std::uint64_t seed) {
    if (da < 1 || dalpha < 1 || db < 1 || de < 1) throw ValidationError("decoupled_instance: dimensions must be positive");
    if (dalpha * db < da) throw ValidationError("decoupled_instance: alpha B too small to hold abar");
    const std::size_t debar = dalpha * db / da;
    const LabeledState phi = random_pure_state({{"a", da}, {"abar", da}}, seed);
    const LabeledState chi = random_pure_state({{"E", de}, {"ebar", debar}}, seed + 1);
    const IsometryMap embed({{"abar", da}, {"ebar", debar}}, {{"alpha", dalpha}, {"B", db}},
                            random_isometry_matrix(da * debar, dalpha * db, seed + 2), 1e-9);
    const LabeledState s = apply_isometry(embed, tensor(phi, chi), {"abar", "ebar"});
    return reorder(s, {"a", "alpha", "B", "E"});
}

json to_json(const PerfectWmiResult& r) {
    return {{"residual", r.residual}, {"deviation", r.deviation}, {"unitarity", r.unitarity}, {"isometry", to_json(r.U)}};
}

}  // namespace ssclab
