#include <doctest.h>

#include "../helpers.hpp"
#include "ssclab/capacities.hpp"
#include "ssclab/channels.hpp"
#include "ssclab/entropics.hpp"
#include "ssclab/protocols.hpp"

using namespace ssclab;
using namespace testutil;

namespace {

OptimizerConfig small_cfg(std::uint64_t seed) {
    OptimizerConfig cfg;
    cfg.seed = seed;
    cfg.restarts = 3;
    cfg.max_iters = 80;
    cfg.tol = 1e-5;
    cfg.threads = 1;
    return cfg;
}

// Independent oracle: full flagged state, then the conditional mutual informations.
double g_oracle(const LabeledState& psi, const Instrument& inst) {
    const std::size_t K = inst.branches.size();
    const std::size_t da = inst.output_dim();
    const Mat rho = psi.density();  // over A, B, E
    const std::size_t dA = psi.dim_of("A"), rest = psi.dim() / dA;
    const auto n = static_cast<Eigen::Index>(da * rest * K * K);
    Mat big = Mat::Zero(n, n);
    for (std::size_t k = 0; k < K; ++k) {
        for (const Mat& kr : inst.branches[k].kraus) {
            Mat op = Mat::Zero(static_cast<Eigen::Index>(da * rest), static_cast<Eigen::Index>(dA * rest));
            for (std::size_t i = 0; i < da; ++i)
                for (std::size_t j = 0; j < dA; ++j)
                    for (std::size_t r = 0; r < rest; ++r)
                        op(static_cast<Eigen::Index>(i * rest + r), static_cast<Eigen::Index>(j * rest + r)) =
                            kr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            const Mat out = inst.branches[k].weight * op * rho * op.adjoint();
            const auto flag = static_cast<Eigen::Index>(k * K + k);
            for (Eigen::Index r = 0; r < out.rows(); ++r)
                for (Eigen::Index c = 0; c < out.cols(); ++c)
                    big(r * static_cast<Eigen::Index>(K * K) + flag, c * static_cast<Eigen::Index>(K * K) + flag) += out(r, c);
        }
    }
    const auto s = LabeledState::mixed({{"a", da}, {"B", psi.dim_of("B")}, {"E", psi.dim_of("E")}, {"al", K}, {"ab", K}}, big, 1e-8);
    return 0.5 * (conditional_mutual_information(s, {"a"}, {"B"}, {"al"}) - conditional_mutual_information(s, {"a"}, {"E"}, {"ab"}));
}

}  // namespace

TEST_SUITE("capacities") {

TEST_CASE("party inference") {
    const auto g = make_pbit({}, 0);
    const Parties p = infer_parties(g);
    CHECK(p.alice == Labels{"key", "shield"});
    CHECK(p.bob == Labels{"key_B", "shield_B"});
    CHECK(p.eve.empty());
    const auto s = random_pure_state({{"A", 2}, {"B", 2}, {"E", 2}, {"X", 2}}, 1);
    const Parties q = infer_parties(s, {"A"}, {"B", "X"});
    CHECK(q.eve == Labels{"E"});
}

TEST_CASE("zero-way wmi examples") {
    const auto epr = maximally_entangled(2);
    Parties p = infer_parties(epr);
    CHECK(std::abs(eval_zero_way_wmi(epr, p, natural_split(epr, p, {"A"})) - 1.0) < 1e-12);

    const auto prod = basis_state({{"A", 2}, {"B", 2}}, 1);
    Parties pp = infer_parties(prod);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto split = split_from_matrix(prod, pp, random_isometry_matrix(2, 4, s), {2, 2});
        CHECK(std::abs(eval_zero_way_wmi(prod, pp, split)) < 1e-10);
        CHECK(std::abs(eval_erasure_coherent(prod, pp, split)) < 1e-9);
    }

    const auto ghz = ket({{"A", 2}, {"B", 2}, {"E", 2}}, {{0, 1.0}, {7, 1.0}});
    Parties pg = infer_parties(ghz);
    CHECK(eval_zero_way_wmi(ghz, pg, natural_split(ghz, pg, {"A"})) <= 1e-12);
}

TEST_CASE("erasure-assisted coherent information") {
    const auto epr = maximally_entangled(2);
    Parties p = infer_parties(epr);
    CHECK(std::abs(eval_erasure_coherent(epr, p, natural_split(epr, p, {"A"})) - 1.0) < 1e-12);

    const auto g = make_pbit({}, 0);
    Parties pg = infer_parties(g);
    const auto split = natural_split(g, pg, {"key"});
    CHECK(eval_erasure_coherent(g, pg, split) >= 0.5 - 1e-9);
    const auto c = proposition_identity_check(g, pg, split);
    CHECK(c.max_gap < 1e-9);
}

TEST_CASE("proposition identity on random instances") {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 60; ++s) {
        const std::size_t da = 1 + s % 3, dal = 1 + (s / 3) % 3, db = 2 + s % 2, de = 1 + (s / 2) % 3;
        const auto psi = random_pure_state({{"A", da * dal}, {"B", db}, {"E", de}}, 50 + s);
        Parties p{{"A"}, {"B"}, {"E"}};
        const auto split = split_from_matrix(psi, p, random_isometry_matrix(da * dal, da * dal, s), {da, dal});
        worst = std::max(worst, proposition_identity_check(psi, p, split).max_gap);
    }
    CHECK(worst < 1e-9);
    const auto epr = maximally_entangled(2);
    Parties p = infer_parties(epr);
    const auto c = proposition_identity_check(epr, p, natural_split(epr, p, {"A"}));
    CHECK(std::abs(c.lhs - 1.0) < 1e-12);
    CHECK(std::abs(c.mid - 1.0) < 1e-12);
    CHECK(std::abs(c.rhs - 1.0) < 1e-12);
}

TEST_CASE("ss-assisted objective") {
    const auto epr = maximally_entangled(2);
    Parties p = infer_parties(epr);
    CHECK(std::abs(eval_ss_assisted(epr, p, natural_split(epr, p, {"A"})) - 1.0) < 1e-12);
    const auto prod = basis_state({{"A", 4}, {"B", 2}}, 0);
    Parties pp = infer_parties(prod);
    CHECK(std::abs(eval_ss_assisted(prod, pp, split_from_matrix(prod, pp, random_isometry_matrix(4, 4, 2), {2, 2}))) < 1e-10);
    // With the erasure embedding, ss(|alpha|+1) reproduces the erasure-assisted value.
    const auto psi = random_pure_state({{"A", 4}, {"B", 2}, {"E", 2}}, 8);
    Parties q{{"A"}, {"B"}, {"E"}};
    const auto split = split_from_matrix(psi, q, random_isometry_matrix(4, 4, 3), {2, 2});
    CHECK(std::abs(eval_ss_assisted(psi, q, split, 3) - eval_erasure_coherent(psi, q, split)) < 1e-9);
    CHECK(ss_embedding(2, 3).cols() == 2);
}

TEST_CASE("eval_G examples and oracle") {
    const auto epr = maximally_entangled(2);
    Parties p = infer_parties(epr);
    Instrument id;
    id.class_tag = InstrumentClass::RO;
    id.branches.push_back({1.0, {Mat::Identity(2, 2)}});
    CHECK(std::abs(eval_G(epr, p, id) - 1.0) < 1e-12);

    // one branch, sigma -> sum_j <j|sigma|j> |j><j|
    Instrument meas;
    meas.class_tag = InstrumentClass::QC;
    meas.branches.push_back({1.0, {}});
    for (int k = 0; k < 2; ++k) {
        Mat m = Mat::Zero(2, 2);
        m(k, k) = 1.0;
        meas.branches[0].kraus.push_back(m);
    }
    CHECK(std::abs(eval_G(epr, p, meas) - 0.5) < 1e-12);
    // keeping the outcome as the flag leaves a product state in each branch
    Instrument flagged;
    flagged.class_tag = InstrumentClass::RO;
    for (const Mat& m : meas.branches[0].kraus) flagged.branches.push_back({1.0, {m}});
    CHECK(std::abs(eval_G(epr, p, flagged)) < 1e-12);

    for (std::uint64_t s = 0; s < 25; ++s) {
        const auto psi = random_pure_state({{"A", 2}, {"B", 2}, {"E", 2}}, 400 + s);
        Parties q{{"A"}, {"B"}, {"E"}};
        for (auto cls : {InstrumentClass::RO, InstrumentClass::QC, InstrumentClass::CP}) {
            InstrumentShape shape{cls, 2, 2, cls == InstrumentClass::RO ? 1u : 2u};
            const Mat w = random_isometry_matrix(2, shape.param_dim(), 900 + s);
            const Instrument inst = instrument_from_isometry(w, shape);
            CHECK_NOTHROW(validate_instrument(inst));
            CHECK(std::abs(eval_G(psi, q, inst) - g_oracle(psi, inst)) < 1e-9);
        }
    }
}

TEST_CASE("RO eval_G equals branch-averaged coherent information") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto psi = random_pure_state({{"A", 3}, {"B", 2}}, 600 + s);
        Parties q = infer_parties(psi);
        const InstrumentShape shape{InstrumentClass::RO, 2, 3, 1};
        const Instrument inst = instrument_from_isometry(random_isometry_matrix(3, shape.param_dim(), s), shape);
        double avg = 0.0;
        for (const auto& br : inst.branches) {
            Mat op = Mat::Zero(4, 6);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int r = 0; r < 2; ++r) op(i * 2 + r, j * 2 + r) = br.kraus[0](i, j);
            const Vec y = std::sqrt(br.weight) * op * psi.amplitudes();
            const double pk = y.squaredNorm();
            if (pk < 1e-15) continue;
            const auto st = LabeledState::pure({{"a", 2}, {"B", 2}}, y / std::sqrt(pk));
            avg += pk * coherent_information(st, {"a"}, {"B"});
        }
        CHECK(std::abs(eval_G(psi, q, inst) - avg) < 1e-9);
    }
}

TEST_CASE("generalized formula specializations") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto psi = random_pure_state({{"A", 4}, {"B", 2}, {"E", 2}}, 70 + s);
        Parties q{{"A"}, {"B"}, {"E"}};
        const Mat u = random_isometry_matrix(4, 4, s + 1);
        const auto two = split_from_matrix(psi, q, u, {2, 2});
        const auto three_trivial = split_from_matrix(psi, q, u, {2, 1, 2});
        CHECK(std::abs(eval_G_general(identity_channel(1, "x", "y"), psi, q, three_trivial) - eval_zero_way_wmi(psi, q, two)) < 1e-12);
        const auto three_erasure = split_from_matrix(psi, q, u, {2, 2, 1});
        CHECK(std::abs(eval_G_general(build_erasure(2), psi, q, three_erasure) - proposition_identity_check(psi, q, two).rhs) < 1e-9);
    }
    const auto epr = maximally_entangled(2);
    Parties p = infer_parties(epr);
    Mat embed = Mat::Zero(6, 2);
    embed(0, 0) = 1.0;
    embed(3, 1) = 1.0;
    CHECK(std::abs(eval_G_general(build_ss(2), epr, p, split_from_matrix(epr, p, embed, {2, 3, 1})) - 1.0) < 1e-12);
}

TEST_CASE("instrument parametrization round trip") {
    const InstrumentShape shape{InstrumentClass::CP, 2, 2, 2};
    const Mat w = random_isometry_matrix(2, shape.param_dim(), 3);
    const Instrument inst = instrument_from_isometry(w, shape);
    const Mat back = cp_isometry_from_instrument(inst, shape);
    CHECK((instrument_from_isometry(back, shape).branches[1].kraus[1] - inst.branches[1].kraus[1]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("optimizer calibration on EPR and product states") {
    const auto epr = maximally_entangled(2);
    const auto prod = basis_state({{"A", 2}, {"B", 2}}, 0);
    for (auto id : {Objective::ZeroWayWmi, Objective::ErasureCoherent, Objective::SsAssisted}) {
        ObjectiveSpec spec;
        spec.id = id;
        Parties p = infer_parties(epr);
        const RateEstimate r = maximize(spec, epr, p, small_cfg(1));
        CHECK(r.value >= 1.0 - 1e-3);
        CHECK(std::abs(evaluate(spec, epr, p, r.certificate) - r.value) < 1e-9);
        Parties pp = infer_parties(prod);
        CHECK(maximize(spec, prod, pp, small_cfg(2)).value <= 1e-6);
    }
}

TEST_CASE("optimizer is deterministic and thread-count independent") {
    const auto psi = random_pure_state({{"A", 2}, {"B", 2}, {"E", 2}}, 31);
    Parties p{{"A"}, {"B"}, {"E"}};
    ObjectiveSpec spec;
    auto cfg = small_cfg(5);
    const RateEstimate a = maximize(spec, psi, p, cfg);
    cfg.threads = 3;
    const RateEstimate b = maximize(spec, psi, p, cfg);
    CHECK(a.value == b.value);
    CHECK(to_json(a, spec).dump() == to_json(b, spec).dump());
}

TEST_CASE("CP search seeded with RO and QC certificates never regresses") {
    const auto psi = random_pure_state({{"A", 2}, {"B", 2}, {"E", 2}}, 77);
    Parties p{{"A"}, {"B"}, {"E"}};
    ObjectiveSpec ro{Objective::G, InstrumentClass::RO, 0, std::nullopt};
    ObjectiveSpec qc{Objective::G, InstrumentClass::QC, 0, std::nullopt};
    ObjectiveSpec cp{Objective::G, InstrumentClass::CP, 0, std::nullopt};
    const auto r1 = maximize(ro, psi, p, small_cfg(1));
    const auto r2 = maximize(qc, psi, p, small_cfg(1));
    auto cfg = small_cfg(1);
    cfg.restarts = 1;
    cfg.max_iters = 5;
    const auto r3 = maximize(cp, psi, p, cfg, {r1.certificate, r2.certificate});
    CHECK(r3.value >= std::max(r1.value, r2.value) - 1e-12);
}

}  // TEST_SUITE
