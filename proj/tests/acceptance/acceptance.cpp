// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "ssclab/capacities.hpp"
#include "ssclab/channels.hpp"
#include "ssclab/classical.hpp"
#include "ssclab/cli.hpp"
#include "ssclab/entropics.hpp"
#include "ssclab/protocols.hpp"

using namespace ssclab;

namespace {

struct Verdict {
    bool ok;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Verdict channels_built() {
    double worst_sc = 0.0, worst_sim = 0.0;
    bool dims_ok = true;
    for (std::size_t d : {2, 3, 4}) {
        const QuantumChannel ss = build_ss(d);
        dims_ok = dims_ok && ss.input_dim() == d * (d + 1) / 2 && ss.output_dim() == d;
        worst_sc = std::max(worst_sc, choi_distance(ss, complementary_channel(ss)));
        const QuantumChannel er = build_erasure(d);
        dims_ok = dims_ok && er.input_dim() == d && er.output_dim() == d + 1;
        worst_sc = std::max(worst_sc, choi_distance(er, complementary_channel(er)));
    }
    for (std::size_t d : {2, 3}) worst_sim = std::max(worst_sim, simulate_erasure_via_ss(d).choi_distance);
    return {dims_ok && worst_sc < 1e-12 && worst_sim < 1e-10,
            fmt("self-complementarity %.2e, erasure-from-ss %.2e", worst_sc, worst_sim)};
}

Verdict antidegradable_simulation() {
    double worst = 0.0;
    for (const QuantumChannel& ch : {build_erasure(2), build_ss(2)}) {
        worst = std::max(worst, simulate_antidegradable_via_ss(ch, self_complementary_antidegrader(ch)).residual);
    }
    return {worst < 1e-8, fmt("max residual %.2e", worst)};
}

Verdict proposition() {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const std::size_t da = 1 + s % 2, dal = 1 + (s / 2) % 2, db = 2 + (s / 4) % 3, de = 1 + (s / 12) % 4;
        const auto psi = random_pure_state({{"A", da * dal}, {"B", db}, {"E", de}}, 1000 + s);
        Parties p{{"A"}, {"B"}, {"E"}};
        const auto split = split_from_matrix(psi, p, random_isometry_matrix(da * dal, da * dal, 5000 + s), {da, dal});
        worst = std::max(worst, proposition_identity_check(psi, p, split).max_gap);
    }
    return {worst < 1e-9, fmt("200 instances, max gap %.2e", worst)};
}

Verdict flag_and_duality() {
    double flag = 0.0, dual = 0.0, dec = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto psi = random_pure_state({{"a", 2 + s % 2}, {"alpha", 1 + (s / 2) % 3}, {"B", 2}, {"E", 1 + (s / 6) % 3}}, 2000 + s);
        const auto r = superactivation_run(psi, {"a"}, {"alpha"}, {"B"});
        flag = std::max(flag, r.flag_gap);
        dual = std::max(dual, r.duality_gap);
    }
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto psi = decoupled_instance(2, 2, 2 + s % 2, 2, 3000 + s);
        const auto r = superactivation_run(psi, {"a"}, {"alpha"}, {"B"});
        dec = std::max(dec, std::abs(r.coh_post - r.wmi_half_mi));
    }
    return {flag < 1e-9 && dual < 1e-9 && dec < 1e-9, fmt("flag %.2e, duality %.2e, decoupled %.2e", flag, dual, dec)};
}

Verdict pbit_superactivation() {
    bool ok = true, some_zero = false;
    std::ostringstream detail;
    for (std::size_t shield : {2, 4}) {
        PbitSpec spec;
        spec.shield_a = spec.shield_b = shield;
        const LabeledState g = make_pbit(spec, 0);
        Parties p = infer_parties(g);
        const LabeledState psi = prepare_pure(g, p);
        const auto r = superactivation_run(g, {"key"}, {"shield"}, {"key_B", "shield_B"});
        some_zero = some_zero || r.coh_pre <= 1e-12;

        ObjectiveSpec obj;
        obj.id = Objective::ErasureCoherent;
        OptimizerConfig cfg;
        cfg.seed = 1;
        cfg.restarts = 2;
        cfg.max_iters = 60;
        cfg.tol = 1e-6;
        const SplittingCertificate nat = natural_split(psi, p, {"key"});
        const auto d = nat.dims();
        cfg.ancilla_dims = {{d[0], d[1]}};
        const RateEstimate est = maximize(obj, psi, p, cfg, {nat});
        ok = ok && est.value >= 0.5 - 1e-3;
        detail << (shield == 2 ? "" : "; ") << "shield " << shield << ": estimate " << fmt("%.6f", est.value) << ", I(a>B) " << fmt("%.2e", r.coh_pre);
    }
    return {ok && some_zero, detail.str()};
}

Verdict calibration() {
    const auto epr = maximally_entangled(2);
    const auto prod = basis_state({{"A", 2}, {"B", 2}}, 0);
    OptimizerConfig cfg;
    cfg.seed = 3;
    cfg.restarts = 4;
    cfg.max_iters = 150;
    cfg.tol = 1e-6;
    double lo = 1.0, hi = 0.0;
    for (auto id : {Objective::ZeroWayWmi, Objective::ErasureCoherent, Objective::SsAssisted}) {
        ObjectiveSpec spec;
        spec.id = id;
        Parties p = infer_parties(epr);
        lo = std::min(lo, maximize(spec, epr, p, cfg).value);
        Parties pp = infer_parties(prod);
        hi = std::max(hi, maximize(spec, prod, pp, cfg).value);
    }
    return {lo >= 1 - 1e-3 && hi <= 1e-6, fmt("EPR min %.6f, product max %.2e", lo, hi)};
}

Verdict g_consistency() {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto psi = random_pure_state({{"A", 3}, {"B", 2}, {"E", 2}}, 4000 + s);
        Parties q{{"A"}, {"B"}, {"E"}};
        const InstrumentShape shape{InstrumentClass::RO, 2, 3, 1};
        const Instrument inst = instrument_from_isometry(random_isometry_matrix(3, shape.param_dim(), 4500 + s), shape);
        double avg = 0.0;
        for (const auto& br : inst.branches) {
            const Vec y = std::sqrt(br.weight) * apply_leading(br.kraus[0], psi.amplitudes(), 4);
            const double pk = y.squaredNorm();
            if (pk < 1e-15) continue;
            const auto st = LabeledState::pure({{"a", 2}, {"B", 2}, {"E", 2}}, y / std::sqrt(pk));
            avg += pk * coherent_information(st, {"a"}, {"B"});
        }
        worst = std::max(worst, std::abs(eval_G(psi, q, inst) - avg));
    }
    const auto psi = random_pure_state({{"A", 2}, {"B", 2}, {"E", 2}}, 77);
    Parties p{{"A"}, {"B"}, {"E"}};
    OptimizerConfig cfg;
    cfg.seed = 1;
    cfg.restarts = 3;
    cfg.max_iters = 80;
    cfg.tol = 1e-5;
    const auto ro = maximize({Objective::G, InstrumentClass::RO, 0, std::nullopt}, psi, p, cfg);
    const auto qc = maximize({Objective::G, InstrumentClass::QC, 0, std::nullopt}, psi, p, cfg);
    cfg.restarts = 1;
    cfg.max_iters = 10;
    const auto cp = maximize({Objective::G, InstrumentClass::CP, 0, std::nullopt}, psi, p, cfg, {ro.certificate, qc.certificate});
    const double regress = std::max(ro.value, qc.value) - cp.value;
    return {worst < 1e-9 && regress <= 1e-12, fmt("RO branch gap %.2e, CP regression %.2e", worst, regress)};
}

Verdict decoupling_trend() {
    const double lam = 0.243;
    Vec v = Vec::Zero(4);
    v(0) = std::sqrt(1 - lam);
    v(3) = std::sqrt(lam);
    const auto psi = LabeledState::pure({{"A", 2}, {"E", 2}}, v);
    auto median_at = [&](std::size_t n) {
        std::vector<double> d;
        for (std::uint64_t s = 0; s < 20; ++s) d.push_back(decoupling_experiment(psi, n, 0.3, s).trace_distance);
        std::sort(d.begin(), d.end());
        return 0.5 * (d[9] + d[10]);
    };
    const double m3 = median_at(3), m8 = median_at(8);
    return {m8 < m3, fmt("median distance n=3 %.4f, n=8 %.4f", m3, m8)};
}

Verdict perfect_wmi() {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto psi = decoupled_instance(2, 2 + s % 2, 2 + (s / 2) % 2, 2, 6000 + s);
        worst = std::max(worst, perfect_wmi_isometry(psi, {"a"}, {"alpha"}, {"B"}, {"E"}).residual);
    }
    bool rejected = false;
    Vec v = Vec::Zero(8);
    v(0) = v(7) = 1 / std::sqrt(2.0);
    try {
        perfect_wmi_isometry(LabeledState::pure({{"a", 2}, {"B", 2}, {"E", 2}}, v), {"a"}, {}, {"B"}, {"E"});
    } catch (const ValidationError&) {
        rejected = true;
    }
    return {worst < 1e-6 && rejected, fmt("max residual %.2e", worst) + (rejected ? ", correlated input rejected" : ", correlated input accepted")};
}

Verdict classical() {
    CkSearchConfig cfg;
    cfg.restarts = 6;
    const double perfect = ck_rate_search(preset_distribution("perfect"), cfg, 1).value;
    const double copy = ck_rate_search(preset_distribution("copy"), cfg, 1).value;
    const double bsc = ck_rate_search(preset_distribution("bsc", 0.1), cfg, 1).value;
    const double h = shannon_entropy({0.9, 0.1});
    double chain = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto p = random_distribution({2 + s % 2, 2, 2 + (s / 2) % 2}, s);
        chain = std::max(chain, chain_identity_check(p, random_markov_pair(p.dims[0], 3, 2, s + 1)).max_gap);
    }
    const bool ok = perfect >= 1 - 1e-6 && copy <= 1e-6 && bsc >= 1 - h - 1e-3 && chain < 1e-10;
    return {ok, fmt("perfect %.6f, copy %.2e, bsc %.6f", perfect, copy, bsc) + fmt(", chain gap %.2e", chain)};
}

Verdict reproducible() {
    auto run = [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        ssclab::cli::run(args, out, err);
        return out.str();
    };
    const std::vector<std::vector<std::string>> cmds{
        {"protocol", "decouple", "--n", "5", "--seed", "11"},
        {"verify", "proposition", "--dims", "2,2,2,2", "--samples", "20", "--seed", "4"},
        {"classical", "ck-rate", "--preset", "bsc", "--seed", "9"},
        {"protocol", "pbit"},
    };
    bool same = true;
    for (const auto& c : cmds) same = same && run(c) == run(c) && !run(c).empty();
    return {same, same ? "identical stdout on rerun" : "stdout differs between runs"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"channel construction", channels_built},
        {"antidegradable simulation", antidegradable_simulation},
        {"proposition identity", proposition},
        {"flag and duality identities", flag_and_duality},
        {"pbit superactivation", pbit_superactivation},
        {"optimizer calibration", calibration},
        {"instrument objective consistency", g_consistency},
        {"decoupling trend", decoupling_trend},
        {"perfect wmi isometry", perfect_wmi},
        {"classical key rate", classical},
        {"reproducible output", reproducible},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v{false, ""};
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failed += !v.ok;
        std::printf("%s %zu %s: %s\n", v.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
