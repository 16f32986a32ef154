#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ssclab/capacities.hpp"
#include "ssclab/channels.hpp"
#include "ssclab/classical.hpp"
#include "ssclab/entropics.hpp"
#include "ssclab/protocols.hpp"

namespace ssclab::cli {

namespace fs = std::filesystem;

json load_json_file(Context& ctx, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    ctx.inputs.emplace_back(path);
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": malformed JSON (" + e.what() + ")", path);
    }
}

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

// "A+A2,B" -> {{A, A2}, {B}}
std::vector<Labels> parse_groups(const std::string& s) {
    std::vector<Labels> out;
    for (const auto& g : split_on(s, ',')) out.push_back(split_on(g, '+'));
    return out;
}

Labels parse_labels(const std::string& s) {
    Labels out;
    for (const auto& g : parse_groups(s)) out.insert(out.end(), g.begin(), g.end());
    return out;
}

std::vector<std::size_t> parse_dims(const std::string& s, const char* field) {
    std::vector<std::size_t> out;
    for (const auto& t : split_on(s, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(t, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != t.size() || v == 0) throw ValidationError("'" + t + "' is not a positive integer", field);
        out.push_back(v);
    }
    return out;
}

// "2x1,2x2" -> {(2,1), (2,2)}
std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::string& s) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& t : split_on(s, ',')) {
        std::string pair = t;
        std::replace(pair.begin(), pair.end(), 'x', ',');
        const auto parts = parse_dims(pair, "--ancilla");
        if (parts.size() != 2) throw ValidationError("ancilla entry '" + t + "' must look like 2x4", "--ancilla");
        out.emplace_back(parts[0], parts[1]);
    }
    return out;
}

LabeledState load_state(Context& ctx, const std::string& path) {
    const json j = load_json_file(ctx, path);
    try {
        return state_from_json(j);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what(), e.field());
    }
}

Labels merge(const std::vector<Labels>& groups) {
    Labels out;
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    return out;
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t i) { return seed * 1000003ULL + i; }

// ---- state ----------------------------------------------------------------

struct StateMakeArgs {
    std::string kind = "epr";
    std::size_t d = 2;
    std::string dims = "2,2,2";
    std::string labels;
    std::size_t key = 2, shield = 2, shield_b = 0;
    std::string twist = "swap", shield_kind = "flower";
};

json state_make(Context& ctx, const StateMakeArgs& a) {
    auto named = [&](Labels defaults, const std::vector<std::size_t>& dims) {
        const Labels names = a.labels.empty() ? defaults : parse_labels(a.labels);
        if (names.size() != dims.size()) throw ValidationError("label count does not match dimension count", "--labels");
        std::vector<Subsystem> subs;
        for (std::size_t i = 0; i < dims.size(); ++i) subs.push_back({names[i], dims[i]});
        return subs;
    };
    if (a.kind == "epr") {
        const auto subs = named({"A", "B"}, {a.d, a.d});
        return to_json(maximally_entangled(a.d, subs[0].name, subs[1].name));
    }
    if (a.kind == "product") {
        const auto dims = parse_dims(a.dims, "--dims");
        Labels defaults;
        for (std::size_t i = 0; i < dims.size(); ++i) defaults.push_back(i < 3 ? std::string(1, "ABE"[i]) : "S" + std::to_string(i));
        return to_json(basis_state(named(defaults, dims), 0));
    }
    if (a.kind == "random") {
        const auto dims = parse_dims(a.dims, "--dims");
        Labels defaults;
        for (std::size_t i = 0; i < dims.size(); ++i) defaults.push_back(i < 3 ? std::string(1, "ABE"[i]) : "S" + std::to_string(i));
        return to_json(random_pure_state(named(defaults, dims), ctx.g.seed));
    }
    if (a.kind == "ghz") {
        const auto subs = named({"A", "B", "E"}, {a.d, a.d, a.d});
        Vec v = Vec::Zero(static_cast<Eigen::Index>(a.d * a.d * a.d));
        for (std::size_t i = 0; i < a.d; ++i) v(static_cast<Eigen::Index>((i * a.d + i) * a.d + i)) = 1.0 / std::sqrt(double(a.d));
        return to_json(LabeledState::pure(subs, v));
    }
    if (a.kind == "pbit") {
        PbitSpec spec;
        spec.key_dim = a.key;
        spec.shield_a = a.shield;
        spec.shield_b = a.shield_b ? a.shield_b : a.shield;
        spec.twist = twist_from_string(a.twist);
        spec.shield = shield_from_string(a.shield_kind);
        return to_json(make_pbit(spec, ctx.g.seed));
    }
    if (a.kind == "decoupled") {
        const auto dims = parse_dims(a.dims, "--dims");
        if (dims.size() != 4) throw ValidationError("decoupled states need --dims a,alpha,B,E", "--dims");
        return to_json(decoupled_instance(dims[0], dims[1], dims[2], dims[3], ctx.g.seed));
    }
    throw ValidationError("unknown state kind '" + a.kind + "'", "--kind");
}

json state_show(Context& ctx, const std::string& path) {
    const LabeledState s = load_state(ctx, path);
    json subs = json::array();
    for (const auto& sub : s.subsystems()) {
        subs.push_back({{"name", sub.name}, {"dim", sub.dim}, {"entropy", entropy(s, {sub.name})}});
    }
    const Mat rho = s.density();
    return {{"kind", s.is_pure() ? "pure" : "mixed"},
            {"dim", s.dim()},
            {"subsystems", subs},
            {"purity", (rho * rho).trace().real()},
            {"entropy", entropy(s, s.labels())}};
}

// ---- channel --------------------------------------------------------------

QuantumChannel builtin_channel(const std::string& kind, std::size_t d) {
    if (kind == "ss") return build_ss(d);
    if (kind == "erasure") return build_erasure(d);
    throw ValidationError("unknown channel kind '" + kind + "' (expected ss or erasure)", "kind");
}

json channel_build(const std::string& kind, std::size_t d) {
    const QuantumChannel ch = builtin_channel(kind, d);
    std::size_t env = 1;
    for (const auto& s : ch.env_subsystems()) env *= s.dim;
    json j{{"kind", kind},
           {"d", d},
           {"input_dim", ch.input_dim()},
           {"output_dim", ch.output_dim()},
           {"env_dim", env},
           {"self_complementary_distance", choi_distance(ch, complementary_channel(ch))},
           {"channel", to_json(ch)}};
    if (kind == "erasure") j["ss_simulation_distance"] = simulate_erasure_via_ss(d).choi_distance;
    return j;
}

json simulation_json(const AntidegradableSimulation& sim) {
    return {{"ss_dim", sim.d},
            {"residual", sim.residual},
            {"symmetry_defect", sim.symmetry_defect},
            {"rb_defect", sim.rb_defect}};
}

struct SimArgs {
    std::string kind = "erasure", channel, anti;
    std::size_t d = 2;
};

json channel_simulate(Context& ctx, const SimArgs& a) {
    if (a.channel.empty()) {
        const QuantumChannel ch = builtin_channel(a.kind, a.d);
        return simulation_json(simulate_antidegradable_via_ss(ch, self_complementary_antidegrader(ch)));
    }
    const QuantumChannel ch = channel_from_json(load_json_file(ctx, a.channel));
    if (a.anti.empty()) throw ValidationError("--anti is required with --channel", "--anti");
    const IsometryMap anti = isometry_from_json(load_json_file(ctx, a.anti));
    json j = simulation_json(simulate_antidegradable_via_ss(ch, anti));
    // Also report how well the supplied map antidegrades the channel.
    std::vector<Subsystem> outs = anti.outputs();
    Labels env;
    for (std::size_t i = 1; i < outs.size(); ++i) env.push_back(outs[i].name);
    if (!env.empty()) j["antidegradable_residual"] = check_antidegradable(ch, QuantumChannel(anti, env)).residual;
    return j;
}

// ---- eval -----------------------------------------------------------------

json eval_quantity(Context& ctx, const std::string& what, const std::string& path, const std::string& parts) {
    const LabeledState s = load_state(ctx, path);
    const auto g = parse_groups(parts);
    auto need = [&](std::size_t n) {
        if (g.size() != n) {
            throw ValidationError("'" + what + "' needs " + std::to_string(n) + " comma-separated parts", "--parts");
        }
    };
    if (what == "entropy") {
        const EntropyReport r = entropy_report(s, merge(g));
        return {{"value", r.value}, {"spectrum", std::vector<double>(r.spectrum.begin(), r.spectrum.end())}, {"clipped_mass", r.clipped_mass}};
    }
    if (what == "mi") {
        need(2);
        return {{"value", mutual_information(s, g[0], g[1])}};
    }
    if (what == "cmi") {
        need(3);
        return {{"value", conditional_mutual_information(s, g[0], g[1], g[2])}};
    }
    if (what == "coherent") {
        need(2);
        return {{"value", coherent_information(s, g[0], g[1])}};
    }
    throw ValidationError("unknown quantity '" + what + "'", "quantity");
}

// ---- optimize -------------------------------------------------------------

struct OptArgs {
    std::string objective, state, split, alice, bob, cls = "cp", ancilla, lambda;
    std::vector<std::string> seed_certs;
    std::size_t restarts = 8, iters = 300, kraus = 2, ss_dim = 0, threads = 0;
    double step = 0.1;
};

ObjectiveSpec objective_spec(Context& ctx, const std::string& name, const std::string& cls, std::size_t ss_dim,
                             const std::string& lambda_path) {
    ObjectiveSpec spec;
    spec.id = objective_from_string(name);
    spec.cls = instrument_class_from_string(cls);
    spec.ss_dim = ss_dim;
    if (spec.id == Objective::GGeneral) {
        if (lambda_path.empty()) throw ValidationError("g-general needs --lambda <channel.json>", "--lambda");
        spec.lambda = channel_from_json(load_json_file(ctx, lambda_path));
    }
    return spec;
}

Certificate certificate_from_json(const json& c, const std::string& path) {
    if (!c.is_object() || !c.contains("kind")) throw ValidationError("certificate needs a kind", path + ".kind");
    const std::string kind = c["kind"].get<std::string>();
    if (kind == "splitting") return split_certificate_from_json(c.at("isometry"), path + ".isometry");
    if (kind == "instrument") return instrument_from_json(c.at("instrument"), path + ".instrument");
    throw ValidationError("unknown certificate kind '" + kind + "'", path + ".kind");
}

json optimize(Context& ctx, const OptArgs& a) {
    const ObjectiveSpec spec = objective_spec(ctx, a.objective, a.cls, a.ss_dim, a.lambda);
    const LabeledState s = load_state(ctx, a.state);
    Parties p = infer_parties(s, parse_labels(a.alice), parse_labels(a.bob));
    const LabeledState psi = prepare_pure(s, p);

    OptimizerConfig cfg;
    cfg.seed = ctx.g.seed;
    cfg.restarts = a.restarts;
    cfg.max_iters = a.iters;
    cfg.init_step = a.step;
    cfg.kraus = a.kraus;
    cfg.threads = a.threads;
    cfg.tol = std::max(ctx.g.tol, 1e-12);
    if (!a.ancilla.empty()) cfg.ancilla_dims = parse_pairs(a.ancilla);

    std::vector<Certificate> seeds;
    if (!a.split.empty()) {
        if (spec.id == Objective::G) throw ValidationError("--split applies to splitting objectives only", "--split");
        const SplittingCertificate nat = natural_split(psi, p, parse_labels(a.split));
        const auto d = nat.dims();
        if (spec.id == Objective::GGeneral) {
            throw ValidationError("g-general takes explicit --ancilla dims, not --split", "--split");
        }
        if (a.ancilla.empty()) cfg.ancilla_dims = {{d[0], d[1]}};
        seeds.push_back(nat);
    }
    for (const auto& f : a.seed_certs) {
        const json j = load_json_file(ctx, f);
        seeds.push_back(certificate_from_json(j.contains("certificate") ? j["certificate"] : j, f));
    }
    const RateEstimate r = maximize(spec, psi, p, cfg, seeds);
    json out = to_json(r, spec);
    out["parties"] = {{"alice", p.alice}, {"bob", p.bob}, {"eve", p.eve}};
    return out;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
    std::string what, dims = "2,2,2,2", state, result, alice, bob, kind = "both";
    std::size_t samples = 200, d = 2;
    bool decoupled = false;
};

std::vector<std::size_t> four_dims(const std::string& s) {
    auto d = parse_dims(s, "--dims");
    if (d.empty() || d.size() > 4) throw ValidationError("--dims takes 1 to 4 entries (a, alpha, B, E)", "--dims");
    while (d.size() < 4) d.push_back(2);
    return d;
}

json verify_random_suite(Context& ctx, const VerifyArgs& a) {
    const auto d = four_dims(a.dims);
    if (a.samples < 1) throw ValidationError("--samples must be positive", "--samples");
    double worst = 0.0;
    json worst_case;
    for (std::size_t i = 0; i < a.samples; ++i) {
        const std::uint64_t seed = sample_seed(ctx.g.seed, i);
        if (a.what == "proposition") {
            const LabeledState s = random_pure_state({{"A", d[0] * d[1]}, {"B", d[2]}, {"E", d[3]}}, seed);
            Parties p{{"A"}, {"B"}, {"E"}};
            const auto split = split_from_matrix(s, p, random_isometry_matrix(d[0] * d[1], d[0] * d[1], seed + 7), {d[0], d[1]});
            const PropositionCheck c = proposition_identity_check(s, p, split);
            if (i == 0 || c.max_gap > worst) {
                worst = c.max_gap;
                worst_case = {{"sample", i}, {"lhs", c.lhs}, {"mid", c.mid}, {"rhs", c.rhs}};
            }
            continue;
        }
        const LabeledState s = a.decoupled ? decoupled_instance(d[0], d[1], d[2], d[3], seed)
                                           : random_pure_state({{"a", d[0]}, {"alpha", d[1]}, {"B", d[2]}, {"E", d[3]}}, seed);
        const SuperactivationReport r = superactivation_run(s, {"a"}, {"alpha"}, {"B"});
        double gap = a.what == "duality" ? r.duality_gap : r.flag_gap;
        if (a.decoupled) gap = std::max(gap, std::abs(r.coh_post - r.wmi_half_mi));
        if (i == 0 || gap > worst) {
            worst = gap;
            worst_case = to_json(r);
            worst_case["sample"] = i;
        }
    }
    return {{"max_gap", worst}, {"samples", a.samples}, {"dims", d}, {"worst", worst_case}};
}

json verify_appendix(const VerifyArgs& a) {
    json j = json::object();
    double worst = 0.0;
    auto one = [&](const std::string& kind) {
        const QuantumChannel ch = builtin_channel(kind, a.d);
        const json r = simulation_json(simulate_antidegradable_via_ss(ch, self_complementary_antidegrader(ch)));
        worst = std::max(worst, r["residual"].get<double>());
        j[kind] = r;
    };
    if (a.kind == "both" || a.kind == "erasure") one("erasure");
    if (a.kind == "both" || a.kind == "ss") one("ss");
    if (j.empty()) throw ValidationError("--kind must be ss, erasure or both", "--kind");
    j["max_residual"] = worst;
    return j;
}

json verify_certificate(Context& ctx, const VerifyArgs& a, int& code) {
    if (a.state.empty() || a.result.empty()) throw ValidationError("verify certificate needs --state and --result", "--result");
    const LabeledState s = load_state(ctx, a.state);
    const json r = load_json_file(ctx, a.result);
    for (const char* k : {"objective", "value", "certificate"}) {
        if (!r.contains(k)) throw ValidationError(std::string("result file lacks '") + k + "'", std::string("$.") + k);
    }
    ObjectiveSpec spec;
    spec.id = objective_from_string(r["objective"].get<std::string>());
    if (r.contains("class")) spec.cls = instrument_class_from_string(r["class"].get<std::string>());
    if (r.contains("ss_dim")) spec.ss_dim = r["ss_dim"].get<std::size_t>();
    if (r.contains("lambda")) spec.lambda = channel_from_json(r["lambda"]);

    Labels alice = parse_labels(a.alice), bob = parse_labels(a.bob);
    if (r.contains("parties") && alice.empty() && bob.empty()) {
        alice = r["parties"]["alice"].get<Labels>();
        bob = r["parties"]["bob"].get<Labels>();
    }
    Parties p = infer_parties(s, alice, bob);
    const LabeledState psi = prepare_pure(s, p);
    const Certificate cert = certificate_from_json(r["certificate"], "$.certificate");
    const double reported = r["value"].get<double>();
    const double recomputed = evaluate(spec, psi, p, cert);
    const double gap = std::abs(reported - recomputed);
    const bool ok = gap < 1e-9;
    if (!ok) code = 1;
    return {{"objective", to_string(spec.id)}, {"reported", reported}, {"recomputed", recomputed}, {"gap", gap}, {"ok", ok}};
}

// ---- protocol -------------------------------------------------------------

struct ProtoArgs {
    std::string state, a, alpha, alice, bob, instrument, instrument_kind = "identity";
    std::size_t n = 4, key = 2, shield = 2, shield_b = 0;
    double epsilon = 0.3, lambda = 0.243;
    std::string twist = "swap", shield_kind = "flower";
};

json protocol_superactivate(Context& ctx, const ProtoArgs& a) {
    const LabeledState s = load_state(ctx, a.state);
    const Labels a_labels = parse_labels(a.a);
    if (a_labels.empty()) throw ValidationError("--a is required", "--a");
    Parties p = infer_parties(s, parse_labels(a.alice), parse_labels(a.bob));
    Labels alpha = parse_labels(a.alpha);
    if (alpha.empty()) {
        for (const auto& l : p.alice) {
            if (std::find(a_labels.begin(), a_labels.end(), l) == a_labels.end()) alpha.push_back(l);
        }
    }
    return to_json(superactivation_run(s, a_labels, alpha, p.bob));
}

LabeledState default_decoupling_state(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("--lambda must lie in (0, 1)", "--lambda");
    Vec v = Vec::Zero(4);
    v(0) = std::sqrt(1.0 - lambda);
    v(3) = std::sqrt(lambda);
    return LabeledState::pure({{"A", 2}, {"E", 2}}, v);
}

json protocol_decouple(Context& ctx, const ProtoArgs& a) {
    const LabeledState s = a.state.empty() ? default_decoupling_state(a.lambda) : load_state(ctx, a.state);
    return to_json(decoupling_experiment(s, a.n, a.epsilon, ctx.g.seed));
}

json protocol_pbit(Context& ctx, const ProtoArgs& a) {
    PbitSpec spec;
    spec.key_dim = a.key;
    spec.shield_a = a.shield;
    spec.shield_b = a.shield_b ? a.shield_b : a.shield;
    spec.twist = twist_from_string(a.twist);
    spec.shield = shield_from_string(a.shield_kind);
    const LabeledState gamma = make_pbit(spec, ctx.g.seed);
    json j = to_json(superactivation_run(gamma, {"key"}, {"shield"}, {"key_B", "shield_B"}));
    j["key_dim"] = spec.key_dim;
    j["shield_a"] = spec.shield_a;
    j["shield_b"] = spec.shield_b;
    j["twist"] = to_string(spec.twist);
    j["shield"] = to_string(spec.shield);
    j["key_defect"] = key_correlation_defect(gamma);
    return j;
}

Instrument builtin_instrument(const std::string& kind, std::size_t d) {
    Instrument inst;
    const auto n = static_cast<Eigen::Index>(d);
    if (kind == "identity") {
        inst.class_tag = InstrumentClass::RO;
        inst.branches.push_back({1.0, {Mat::Identity(n, n)}});
    } else if (kind == "measure") {
        inst.class_tag = InstrumentClass::QC;
        for (Eigen::Index k = 0; k < n; ++k) {
            Mat m = Mat::Zero(n, n);
            m(k, k) = 1.0;
            inst.branches.push_back({1.0, {m}});
        }
    } else {
        throw ValidationError("unknown instrument kind '" + kind + "' (identity or measure)", "--instrument-kind");
    }
    return inst;
}

json protocol_wmi_run(Context& ctx, const ProtoArgs& a) {
    const LabeledState s = load_state(ctx, a.state);
    Parties p = infer_parties(s, parse_labels(a.alice), parse_labels(a.bob));
    const Instrument inst = a.instrument.empty() ? builtin_instrument(a.instrument_kind, s.dim_of(p.alice))
                                                 : instrument_from_json(load_json_file(ctx, a.instrument));
    return to_json(wmi_lower_bound_protocol(s, p, inst, a.n, a.epsilon, ctx.g.seed));
}

// ---- classical ------------------------------------------------------------

struct ClassicalArgs {
    std::string dist, preset, pair;
    double flip = 0.1;
    std::size_t cap_v = 0, cap_u = 0, restarts = 8, iters = 400, samples = 20, threads = 0;
};

std::optional<JointDistribution> classical_input(Context& ctx, const ClassicalArgs& a) {
    if (!a.dist.empty() && !a.preset.empty()) throw ValidationError("give either --dist or --preset", "--dist");
    if (!a.dist.empty()) {
        const json j = load_json_file(ctx, a.dist);
        try {
            return distribution_from_json(j);
        } catch (const ValidationError& e) {
            throw ValidationError(a.dist + ": " + e.what(), e.field());
        }
    }
    if (!a.preset.empty()) return preset_distribution(a.preset, a.flip);
    return std::nullopt;
}

json classical_ck_rate(Context& ctx, const ClassicalArgs& a) {
    const auto p = classical_input(ctx, a);
    if (!p) throw ValidationError("ck-rate needs --dist or --preset", "--dist");
    CkSearchConfig cfg;
    cfg.cap_v = a.cap_v;
    cfg.cap_u = a.cap_u;
    cfg.restarts = a.restarts;
    cfg.max_iters = a.iters;
    cfg.threads = a.threads;
    json j = to_json(ck_rate_search(*p, cfg, ctx.g.seed));
    j["distribution"] = to_json(*p);
    return j;
}

json classical_chain_check(Context& ctx, const ClassicalArgs& a) {
    const auto fixed = classical_input(ctx, a);
    if (!a.pair.empty()) {
        if (!fixed) throw ValidationError("--pair needs --dist or --preset", "--pair");
        const MarkovPair mp = markov_pair_from_json(load_json_file(ctx, a.pair));
        json j = to_json(chain_identity_check(*fixed, mp));
        j["samples"] = 1;
        return j;
    }
    if (a.samples < 1) throw ValidationError("--samples must be positive", "--samples");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.samples; ++i) {
        const std::uint64_t seed = sample_seed(ctx.g.seed, i);
        std::array<std::size_t, 3> dims{2 + seed % 2, 2 + (seed / 2) % 2, 2 + (seed / 4) % 2};
        const JointDistribution p = fixed ? *fixed : random_distribution(dims, seed);
        const MarkovPair mp = random_markov_pair(p.dims[0], 2 + (seed / 8) % 2, 2 + (seed / 16) % 2, seed + 11);
        worst = std::max(worst, chain_identity_check(p, mp).max_gap);
    }
    return {{"max_gap", worst}, {"samples", a.samples}};
}

// ---- output ---------------------------------------------------------------

void write_csv_result(Context& ctx, const std::string& name, const json& result) {
    if (ctx.g.out.empty()) throw ValidationError("--format csv writes files and needs --out <dir>", "--out");
    std::string header, row;
    for (auto it = result.begin(); it != result.end(); ++it) {
        if (!it.value().is_primitive()) continue;
        if (!header.empty()) {
            header += ',';
            row += ',';
        }
        header += it.key();
        row += it.value().is_string() ? it.value().get<std::string>() : dump(it.value(), -1);
    }
    const fs::path path = fs::path(ctx.g.out) / (name + ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path.string() + "'", "--out");
    f << header << '\n' << row << '\n';
    f.close();
    ctx.outputs.push_back(path);
}

json error_object(const std::string& kind, const std::string& message, const std::string& field) {
    json e{{"kind", kind}, {"message", message}};
    if (!field.empty()) e["field"] = field;
    return {{"error", e}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx;
    CLI::App app{"ssclab: symmetric-side channel and private-correlation numerics", "ssclab"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", ctx.g.seed, "Random seed")->capture_default_str();
    app.add_option("--tol", ctx.g.tol, "Numerical tolerance")->capture_default_str();
    app.add_option("--out", ctx.g.out, "Directory for CSV files and manifest.json");
    app.add_option("--format", ctx.g.format, "Result format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    std::string command;
    std::function<json()> action;
    int code = 0;

    // state
    auto* state = app.add_subcommand("state", "Build or inspect states")->require_subcommand(1);
    StateMakeArgs sm;
    auto* make = state->add_subcommand("make", "Emit a state file on stdout");
    make->add_option("--kind", sm.kind, "epr|product|random|ghz|pbit|decoupled")->capture_default_str();
    make->add_option("--d", sm.d, "Local dimension (epr, ghz)")->capture_default_str();
    make->add_option("--dims", sm.dims, "Comma-separated dimensions (product, random, decoupled)")->capture_default_str();
    make->add_option("--labels", sm.labels, "Comma-separated labels");
    make->add_option("--key", sm.key, "pbit key dimension")->capture_default_str();
    make->add_option("--shield", sm.shield, "pbit shield dimension (Alice)")->capture_default_str();
    make->add_option("--shield-b", sm.shield_b, "pbit shield dimension (Bob), default = --shield");
    make->add_option("--twist", sm.twist, "identity|swap|random")->capture_default_str();
    make->add_option("--shield-kind", sm.shield_kind, "maximally-mixed|flower|random")->capture_default_str();
    make->callback([&] {
        command = "state make";
        action = [&] { return state_make(ctx, sm); };
    });
    std::string show_path;
    auto* show = state->add_subcommand("show", "Summarize a state file");
    show->add_option("--state", show_path, "State file")->required();
    show->callback([&] {
        command = "state show";
        action = [&] { return state_show(ctx, show_path); };
    });

    // channel
    auto* channel = app.add_subcommand("channel", "Channel constructions")->require_subcommand(1);
    std::string build_kind;
    std::size_t build_d = 2;
    auto* build = channel->add_subcommand("build", "Build ss or erasure channel");
    build->add_option("kind", build_kind, "ss|erasure")->required()->check(CLI::IsMember({"ss", "erasure"}));
    build->add_option("--d", build_d, "Dimension parameter")->required();
    build->callback([&] {
        command = "channel build";
        action = [&] { return channel_build(build_kind, build_d); };
    });
    SimArgs sim;
    auto* simulate = channel->add_subcommand("simulate-antidegradable", "Simulate an antidegradable channel with ss(d)");
    simulate->add_option("--kind", sim.kind, "Built-in self-complementary channel: ss|erasure")->capture_default_str();
    simulate->add_option("--d", sim.d, "Built-in channel dimension")->capture_default_str();
    simulate->add_option("--channel", sim.channel, "Channel file");
    simulate->add_option("--anti", sim.anti, "Antidegrading isometry file E -> F G");
    simulate->callback([&] {
        command = "channel simulate-antidegradable";
        action = [&] { return channel_simulate(ctx, sim); };
    });

    // eval
    std::string eval_what, eval_state, eval_parts;
    auto* eval = app.add_subcommand("eval", "Entropic quantities of a state");
    eval->add_option("quantity", eval_what, "entropy|mi|cmi|coherent")->required()->check(CLI::IsMember({"entropy", "mi", "cmi", "coherent"}));
    eval->add_option("--state", eval_state, "State file")->required();
    eval->add_option("--parts", eval_parts, "Comma-separated parts; join labels with +")->required();
    eval->callback([&] {
        command = "eval " + eval_what;
        action = [&] { return eval_quantity(ctx, eval_what, eval_state, eval_parts); };
    });

    // optimize
    OptArgs oa;
    auto* opt = app.add_subcommand("optimize", "Maximize a rate objective");
    opt->add_option("objective", oa.objective, "wmi|erasure-coherent|ss-assisted|g|g-general")
        ->required()
        ->check(CLI::IsMember({"wmi", "erasure-coherent", "ss-assisted", "g", "g-general"}));
    opt->add_option("--state", oa.state, "State file")->required();
    opt->add_option("--split", oa.split, "Alice's registers forming a (seeds the identity split)");
    opt->add_option("--alice", oa.alice, "Alice's labels");
    opt->add_option("--bob", oa.bob, "Bob's labels");
    opt->add_option("--class", oa.cls, "Instrument class for g: ro|qc|cp")->check(CLI::IsMember({"ro", "qc", "cp"}))->capture_default_str();
    opt->add_option("--ancilla", oa.ancilla, "Dimension pairs, e.g. 2x1,2x2");
    opt->add_option("--restarts", oa.restarts, "Random restarts per dimension")->capture_default_str();
    opt->add_option("--iters", oa.iters, "Sweep limit per restart")->capture_default_str();
    opt->add_option("--step", oa.step, "Initial rotation angle")->capture_default_str();
    opt->add_option("--kraus", oa.kraus, "Kraus operators per branch (qc, cp)")->capture_default_str();
    opt->add_option("--ss-dim", oa.ss_dim, "ss channel dimension (0 = |alpha|+1)")->capture_default_str();
    opt->add_option("--lambda", oa.lambda, "Channel file for g-general");
    opt->add_option("--seed-cert", oa.seed_certs, "Result or certificate files used as starting points");
    opt->add_option("--threads", oa.threads, "Worker threads (0 = SSCLAB_THREADS or auto)")->capture_default_str();
    opt->callback([&] {
        command = "optimize " + oa.objective;
        action = [&] { return optimize(ctx, oa); };
    });

    // verify
    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Identity and certificate checks");
    verify->add_option("check", va.what, "proposition|duality|flag-split|appendix|certificate")
        ->required()
        ->check(CLI::IsMember({"proposition", "duality", "flag-split", "appendix", "certificate"}));
    verify->add_option("--dims", va.dims, "a,alpha,B,E dimensions")->capture_default_str();
    verify->add_option("--samples", va.samples, "Random instances")->capture_default_str();
    verify->add_flag("--decoupled", va.decoupled, "Use exactly decoupled instances");
    verify->add_option("--kind", va.kind, "appendix channel: ss|erasure|both")->capture_default_str();
    verify->add_option("--d", va.d, "appendix channel dimension")->capture_default_str();
    verify->add_option("--state", va.state, "State file (certificate)");
    verify->add_option("--result", va.result, "Optimizer result file (certificate)");
    verify->add_option("--alice", va.alice, "Alice's labels");
    verify->add_option("--bob", va.bob, "Bob's labels");
    verify->callback([&] {
        command = "verify " + va.what;
        action = [&]() -> json {
            if (va.what == "appendix") return verify_appendix(va);
            if (va.what == "certificate") return verify_certificate(ctx, va, code);
            return verify_random_suite(ctx, va);
        };
    });

    // protocol
    ProtoArgs pa;
    std::string proto;
    auto* protocol = app.add_subcommand("protocol", "Protocol experiments");
    protocol->add_option("name", proto, "superactivate|decouple|pbit|wmi-run")
        ->required()
        ->check(CLI::IsMember({"superactivate", "decouple", "pbit", "wmi-run"}));
    protocol->add_option("--state", pa.state, "State file");
    protocol->add_option("--a", pa.a, "Registers forming a");
    protocol->add_option("--alpha", pa.alpha, "Registers forming alpha (default: Alice's rest)");
    protocol->add_option("--alice", pa.alice, "Alice's labels");
    protocol->add_option("--bob", pa.bob, "Bob's labels");
    protocol->add_option("--n", pa.n, "Copies")->capture_default_str();
    protocol->add_option("--epsilon", pa.epsilon, "Typicality window")->capture_default_str();
    protocol->add_option("--lambda", pa.lambda, "Smaller Schmidt weight of the default qubit state")->capture_default_str();
    protocol->add_option("--key", pa.key, "pbit key dimension")->capture_default_str();
    protocol->add_option("--shield", pa.shield, "pbit shield dimension")->capture_default_str();
    protocol->add_option("--shield-b", pa.shield_b, "pbit Bob shield dimension");
    protocol->add_option("--twist", pa.twist, "identity|swap|random")->capture_default_str();
    protocol->add_option("--shield-kind", pa.shield_kind, "maximally-mixed|flower|random")->capture_default_str();
    protocol->add_option("--instrument", pa.instrument, "Instrument file (wmi-run)");
    protocol->add_option("--instrument-kind", pa.instrument_kind, "identity|measure")->capture_default_str();
    protocol->callback([&] {
        command = "protocol " + proto;
        action = [&]() -> json {
            if (proto == "decouple") return protocol_decouple(ctx, pa);
            if (proto == "pbit") return protocol_pbit(ctx, pa);
            if (pa.state.empty()) throw ValidationError("--state is required", "--state");
            if (proto == "superactivate") return protocol_superactivate(ctx, pa);
            return protocol_wmi_run(ctx, pa);
        };
    });

    // classical
    ClassicalArgs ca;
    std::string cl_what;
    auto* classical = app.add_subcommand("classical", "Classical one-way key baseline");
    classical->add_option("check", cl_what, "ck-rate|chain-check")->required()->check(CLI::IsMember({"ck-rate", "chain-check"}));
    classical->add_option("--dist", ca.dist, "Distribution file {dims, probs}");
    classical->add_option("--preset", ca.preset, "perfect|copy|bsc");
    classical->add_option("--flip", ca.flip, "bsc flip probability")->capture_default_str();
    classical->add_option("--pair", ca.pair, "Markov pair file {chanXV, chanVU}");
    classical->add_option("--cap-v", ca.cap_v, "|V| cap (0 = |X|+1)")->capture_default_str();
    classical->add_option("--cap-u", ca.cap_u, "|U| cap (0 = |X|+1)")->capture_default_str();
    classical->add_option("--restarts", ca.restarts, "Restarts")->capture_default_str();
    classical->add_option("--iters", ca.iters, "Sweeps per restart")->capture_default_str();
    classical->add_option("--samples", ca.samples, "Random instances (chain-check)")->capture_default_str();
    classical->add_option("--threads", ca.threads, "Worker threads")->capture_default_str();
    classical->callback([&] {
        command = "classical " + cl_what;
        action = [&] { return cl_what == "ck-rate" ? classical_ck_rate(ctx, ca) : classical_chain_check(ctx, ca); };
    });

    // sweep
    std::string spec_path;
    auto* sweep = app.add_subcommand("sweep", "Run a command over a parameter grid");
    sweep->add_option("--spec", spec_path, "Sweep spec file")->required();
    sweep->callback([&] {
        command = "sweep";
        action = [&] { return run_sweep(ctx, spec_path); };
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        out << dump(error_object("usage", e.what(), "")) << '\n';
        return 2;
    }
    if (!action) {
        out << dump(error_object("usage", "no command given", "")) << '\n';
        return 2;
    }

    try {
        json result = action();
        if (!ctx.g.out.empty()) fs::create_directories(ctx.g.out);
        if (ctx.g.format == "csv") write_csv_result(ctx, command.substr(command.rfind(' ') + 1), result);
        const std::string payload = dump(result);
        out << payload << '\n';
        json config;
        config["argv"] = args;
        RunManifest m(command, config, ctx.g.seed);
        for (const auto& p : ctx.inputs) m.add_input(p);
        for (const auto& p : ctx.outputs) m.add_output(p);
        m.add_payload("stdout", payload);
        m.emit(err, ctx.g.out);
        return code;
    } catch (const ValidationError& e) {
        out << dump(error_object("validation", e.what(), e.field())) << '\n';
        return 2;
    } catch (const json::exception& e) {
        out << dump(error_object("validation", std::string("malformed input: ") + e.what(), "")) << '\n';
        return 2;
    } catch (const ConsistencyError& e) {
        out << dump(error_object("internal", e.what(), "")) << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        out << dump(error_object("validation", e.what(), "")) << '\n';
        return 2;
    } catch (const std::exception& e) {
        out << dump(error_object("internal", e.what(), "")) << '\n';
        return 1;
    }
}

}  // namespace ssclab::cli
