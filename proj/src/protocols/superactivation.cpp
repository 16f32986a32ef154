#include <algorithm>
#include <cmath>
#include <set>

#include "ssclab/channels.hpp"
#include "ssclab/entropics.hpp"
#include "ssclab/protocols.hpp"

namespace ssclab {

namespace {

std::string fresh(std::string base, const LabeledState& s) {
    while (s.has(base)) base += "'";
    return base;
}

Labels concat(Labels a, const Labels& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

SuperactivationReport superactivation_run(const LabeledState& psi_in, const Labels& a, const Labels& alpha_in,
                                          const Labels& bob) {
    if (a.empty()) throw ValidationError("superactivation_run: a is empty", "a");
    if (bob.empty()) throw ValidationError("superactivation_run: Bob holds nothing", "bob");
    std::set<std::string> used;
    for (const auto& n : concat(concat(a, alpha_in), bob)) {
        if (!psi_in.has(n)) throw ValidationError("superactivation_run: unknown label '" + n + "'", n);
        if (!used.insert(n).second) throw ValidationError("superactivation_run: label '" + n + "' used twice", n);
    }
    LabeledState psi = psi_in;
    Labels eve;
    for (const auto& n : psi.labels()) {
        if (!used.count(n)) eve.push_back(n);
    }
    if (!psi.is_pure()) {
        const std::string env = fresh("E", psi);
        psi = purify(psi, {env, psi.dim()});
        eve.push_back(env);
    }
    Labels alpha = alpha_in;
    if (alpha.empty()) {
        const std::string name = fresh("alpha", psi);
        psi = tensor(psi, basis_state({{name, 1}}, 0));
        alpha.push_back(name);
    }
    const std::size_t dal = psi.dim_of(alpha);

    SuperactivationReport r;
    r.coh_pre = coherent_information(psi, a, bob);
    r.coh_branch_kept = coherent_information(psi, a, concat(bob, alpha));
    r.coh_branch_erased = r.coh_pre;
    r.wmi_half_mi = 0.5 * mutual_information(psi, a, bob);
    r.a_e_mutual_info = eve.empty() ? 0.0 : mutual_information(psi, a, eve);
    r.duality_rhs = 0.5 * (r.coh_pre - (eve.empty() ? -entropy(psi, a) : coherent_information(psi, a, eve)));

    const std::string b = fresh("b", psi);
    std::string e = fresh("e", psi);
    if (e == b) e += "'";
    const IsometryMap er({{"alpha", dal}}, {{b, dal + 1}, {e, dal + 1}}, erasure_isometry_matrix(dal));
    const LabeledState out = apply_isometry(er, psi, alpha);
    r.coh_post = coherent_information(out, a, concat(bob, {b}));
    r.flag_gap = std::abs(r.coh_post - 0.5 * (r.coh_branch_kept + r.coh_branch_erased));
    r.duality_gap = std::abs(r.coh_post - r.duality_rhs);
    return r;
}

json to_json(const SuperactivationReport& r) {
    return {{"coh_pre", r.coh_pre},
            {"coh_branch_kept", r.coh_branch_kept},
            {"coh_branch_erased", r.coh_branch_erased},
            {"coh_post", r.coh_post},
            {"wmi_half_mi", r.wmi_half_mi},
            {"duality_rhs", r.duality_rhs},
            {"a_e_mutual_info", r.a_e_mutual_info},
            {"flag_gap", r.flag_gap},
            {"duality_gap", r.duality_gap}};
}

}  // namespace ssclab
