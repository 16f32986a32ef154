#include <doctest.h>

#include "../helpers.hpp"
#include "ssclab/channels.hpp"
#include "ssclab/serialize.hpp"

using namespace ssclab;
using namespace testutil;

TEST_SUITE("qcore") {

TEST_CASE("tensor of basis states and mixed factors") {
    const auto a = basis_state({{"A", 2}}, 0);
    const auto b = basis_state({{"B", 2}}, 0);
    const auto ab = tensor(a, b);
    CHECK(ab.is_pure());
    CHECK(std::abs(ab.amplitudes()(0) - cplx(1.0)) < 1e-15);
    CHECK(ab.labels() == Labels{"A", "B"});

    const auto mm = tensor(maximally_mixed({{"A", 2}}), maximally_mixed({{"B", 2}}));
    CHECK((mm.density_matrix() - Mat::Identity(4, 4) / 4.0).norm() < 1e-15);

    const auto pm = tensor(a, maximally_mixed({{"B", 2}}));
    CHECK_FALSE(pm.is_pure());
    CHECK(std::abs(pm.density_matrix().trace() - cplx(1.0)) < 1e-12);

    CHECK_THROWS_AS(tensor(a, basis_state({{"A", 3}}, 1)), ValidationError);
}

TEST_CASE("partial trace examples") {
    const auto epr = maximally_entangled(2);
    CHECK((partial_trace(epr, {"B"}).density_matrix() - Mat::Identity(2, 2) / 2.0).norm() < 1e-15);

    const Mat ra = random_density(2, 2, 1), sb = random_density(3, 3, 2);
    const auto prod = tensor(LabeledState::mixed({{"A", 2}}, ra), LabeledState::mixed({{"B", 3}}, sb));
    CHECK((partial_trace(prod, {"B"}).density_matrix() - ra).norm() < 1e-12);
    CHECK((partial_trace(prod, {"A"}).density_matrix() - sb).norm() < 1e-12);
    CHECK_THROWS_AS(partial_trace(epr, {"A", "B"}), ValidationError);
    CHECK_THROWS_AS(partial_trace(epr, {"Q"}), ValidationError);

    // purification round trip on a random three-party pure state
    const auto psi = random_pure_state({{"A", 2}, {"B", 3}, {"E", 2}}, 5);
    const auto rab = partial_trace(psi, {"E"});
    CHECK(std::abs(rab.density_matrix().trace() - cplx(1.0)) < 1e-12);
    const auto again = partial_trace(purify(rab, {"F", 6}), {"F"});
    CHECK(trace_distance(again.density_matrix(), rab.density_matrix()) < 1e-10);
}

TEST_CASE("partial trace of a middle subsystem matches explicit sum") {
    const auto psi = random_pure_state({{"A", 2}, {"B", 3}, {"C", 2}}, 17);
    const Mat rho = psi.density();
    Mat expect = Mat::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
            for (int a2 = 0; a2 < 2; ++a2)
                for (int c2 = 0; c2 < 2; ++c2)
                    for (int b = 0; b < 3; ++b) expect(a * 2 + c, a2 * 2 + c2) += rho((a * 3 + b) * 2 + c, (a2 * 3 + b) * 2 + c2);
    CHECK((partial_trace(psi, {"B"}).density_matrix() - expect).norm() < 1e-13);
    CHECK((partial_trace(psi.as_mixed(), {"B"}).density_matrix() - expect).norm() < 1e-13);
}

TEST_CASE("purify") {
    const auto mm = maximally_mixed({{"A", 2}});
    const auto p = purify(mm, {"R", 2});
    CHECK(p.is_pure());
    CHECK((partial_trace(p, {"R"}).density_matrix() - mm.density_matrix()).norm() < 1e-12);

    const auto pure = basis_state({{"A", 3}}, 1).as_mixed();
    const auto pp = purify(pure, {"R", 1});
    CHECK(std::abs(std::abs(pp.amplitudes()(1)) - 1.0) < 1e-12);

    const Mat r3 = random_density(3, 3, 11);
    const auto rho = LabeledState::mixed({{"A", 3}}, r3);
    const auto q = purify(rho, {"R", 3});
    CHECK(trace_distance(partial_trace(q, {"R"}).density_matrix(), r3) < 1e-10);
    CHECK_THROWS_AS(purify(rho, {"R", 2}), ValidationError);

    // canonical: first component of each Schmidt vector real positive, deterministic
    const auto q2 = purify(rho, {"R", 3});
    CHECK((q.amplitudes() - q2.amplitudes()).norm() == 0.0);
}

TEST_CASE("apply_channel examples") {
    const auto id = identity_channel(2, "A", "A");
    const Mat r = random_density(2, 2, 3);
    const auto out = apply_channel(id, LabeledState::mixed({{"A", 2}}, r), {"A"});
    CHECK((out.density_matrix() - r).norm() < 1e-14);

    const auto er = build_erasure(2);
    const auto e0 = apply_channel(er, basis_state({{"A", 2}}, 0), {"A"});
    Mat expect = Mat::Zero(3, 3);
    expect(0, 0) = 0.5;
    expect(2, 2) = 0.5;
    CHECK((e0.density_matrix() - expect).norm() < 1e-14);

    // apply_channel agrees with isometry then partial trace, with spectators
    const auto ch = random_channel(2, 3, 2, 9);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto psi = random_pure_state({{"X", 2}, {"in", 2}, {"Y", 2}}, 100 + s);
        const auto a = apply_channel(ch, psi, {"in"});
        const auto b = partial_trace(apply_isometry(ch.stinespring(), psi, {"in"}), ch.env_labels());
        CHECK(a.labels() == b.labels());
        CHECK((a.density_matrix() - b.density_matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("ss(2) on diagonal inputs gives the symmetric broadcast marginal") {
    // |00> -> |00>, |11> -> |11>, the middle pair (0,1) -> (|01>+|10>)/sqrt2.
    const auto ss = build_ss(2);
    for (std::size_t k = 0; k < 3; ++k) {
        const auto out = apply_channel(ss, basis_state({{"A", 3}}, k), {"A"});
        Mat expect = Mat::Zero(2, 2);
        if (k == 0) expect(0, 0) = 1.0;
        if (k == 2) expect(1, 1) = 1.0;
        if (k == 1) expect = Mat::Identity(2, 2) / 2.0;
        CHECK((out.density_matrix() - expect).norm() < 1e-14);
    }
}

TEST_CASE("complementary channel and Choi") {
    const auto ch = random_channel(2, 2, 3, 4);
    CHECK(choi_distance(complementary_channel(complementary_channel(ch)), ch) < 1e-12);
    for (std::size_t d : {2, 3, 4}) {
        CHECK(choi_distance(build_ss(d), complementary_channel(build_ss(d))) < 1e-12);
        CHECK(choi_distance(build_erasure(d), complementary_channel(build_erasure(d))) < 1e-12);
    }

    const auto c = choi(identity_channel(2));
    CHECK((c.density_matrix() - maximally_entangled(2).density()).norm() < 1e-14);

    // completely depolarizing: trace and replace with maximally mixed, Stinespring via a maximally entangled env pair
    Mat v = Mat::Zero(8, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) v((j * 2 + j) * 2 + i, i) += 0.0;
    // |i> -> (1/sqrt2) sum_j |j>_B |j>_E' |i>_E
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) v((j * 2 + j) * 2 + i, i) = 1.0 / std::sqrt(2.0);
    const QuantumChannel dep(IsometryMap({{"A", 2}}, {{"B", 2}, {"E1", 2}, {"E2", 2}}, v), {"E1", "E2"});
    CHECK((choi(dep).density_matrix() - Mat::Identity(4, 4) / 4.0).norm() < 1e-14);

    const auto ce = choi(build_erasure(2)).density_matrix();
    double flag = 0.0;
    for (int r = 0; r < 2; ++r) flag += ce(r * 3 + 2, r * 3 + 2).real();
    CHECK(std::abs(flag - 0.5) < 1e-12);
}

TEST_CASE("trace distance") {
    const auto z = basis_state({{"A", 2}}, 0);
    const auto o = basis_state({{"A", 2}}, 1);
    const auto plus = ket({{"A", 2}}, {{0, 1.0}, {1, 1.0}});
    CHECK(trace_distance(z, z) == doctest::Approx(0.0));
    CHECK(std::abs(trace_distance(z, o) - 1.0) < 1e-12);
    CHECK(std::abs(trace_distance(z, plus) - std::sqrt(2.0) / 2) < 1e-12);
    CHECK(std::abs(trace_distance(z.as_mixed(), plus.as_mixed()) - std::sqrt(2.0) / 2) < 1e-12);
    CHECK_THROWS_AS(trace_distance(z, basis_state({{"A", 3}}, 0)), ValidationError);

    const Mat u = random_isometry_matrix(3, 3, 8);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Mat a = random_density(3, 2, s), b = random_density(3, 3, s + 50), c = random_density(3, 1, s + 90);
        CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10);
        CHECK(std::abs(trace_distance(u * a * u.adjoint(), u * b * u.adjoint()) - trace_distance(a, b)) < 1e-10);
    }
}

TEST_CASE("random isometry") {
    const Mat u = random_isometry_matrix(3, 3, 1);
    CHECK((u.adjoint() * u - Mat::Identity(3, 3)).norm() < 1e-10);
    CHECK((u * u.adjoint() - Mat::Identity(3, 3)).norm() < 1e-10);
    CHECK((random_isometry_matrix(2, 6, 7) - random_isometry_matrix(2, 6, 7)).norm() == 0.0);
    const Mat v = random_isometry_matrix(2, 6, 7);
    CHECK((v.adjoint() * v - Mat::Identity(2, 2)).norm() < 1e-10);
    CHECK_THROWS_AS(random_isometry(3, 2, 1), ValidationError);
}

TEST_CASE("state validation") {
    Vec v = Vec::Zero(2);
    v(0) = 2.0;
    CHECK_THROWS_AS(LabeledState::pure({{"A", 2}}, v), ValidationError);
    CHECK_THROWS_AS(LabeledState::pure({{"A", 2}, {"A", 1}}, Vec::Ones(2) / std::sqrt(2.0)), ValidationError);
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    CHECK_THROWS_AS(LabeledState::mixed({{"A", 2}}, m), ValidationError);
    CHECK_THROWS_AS(IsometryMap({{"A", 2}}, {{"B", 2}}, Mat::Ones(2, 2)), ValidationError);
}

TEST_CASE("reorder and relabel") {
    const auto psi = random_pure_state({{"A", 2}, {"B", 3}, {"C", 4}}, 3);
    const auto r = reorder(psi, {"C", "A", "B"});
    const auto back = reorder(r, {"A", "B", "C"});
    CHECK((back.amplitudes() - psi.amplitudes()).norm() == 0.0);
    CHECK(std::abs(r.amplitudes()((3 * 2 + 1) * 3 + 2) - psi.amplitudes()((1 * 3 + 2) * 4 + 3)) == 0.0);
    CHECK(psi.relabeled({{"A", "Z"}}).labels() == Labels{"Z", "B", "C"});
}

TEST_CASE("serialization round trip and error paths") {
    const auto psi = random_pure_state({{"A", 2}, {"B", 3}}, 21);
    const auto back = state_from_json(to_json(psi));
    CHECK((back.amplitudes() - psi.amplitudes()).norm() == 0.0);
    const auto mixed = partial_trace(random_pure_state({{"A", 2}, {"B", 2}, {"E", 2}}, 4), {"E"});
    CHECK((state_from_json(to_json(mixed)).density_matrix() - mixed.density_matrix()).norm() == 0.0);

    const auto ch = build_ss(3);
    CHECK(choi_distance(channel_from_json(to_json(ch)), ch) == 0.0);

    json bad = to_json(psi);
    bad["data"]["re"].erase(0);
    try {
        state_from_json(bad);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.field().find("data") != std::string::npos);
    }
    json bad2 = to_json(psi);
    bad2["subsystems"][0]["dim"] = "two";
    CHECK_THROWS_AS(state_from_json(bad2), ValidationError);
}

TEST_CASE("instrument validation") {
    Instrument ok;
    ok.class_tag = InstrumentClass::RO;
    ok.branches.push_back({1.0, {Mat::Identity(2, 2)}});
    CHECK_NOTHROW(validate_instrument(ok));
    Instrument bad = ok;
    bad.branches[0].kraus.push_back(Mat::Identity(2, 2));
    CHECK_THROWS_AS(validate_instrument(bad), ValidationError);
    Instrument incomplete = ok;
    incomplete.branches[0].weight = 0.5;
    CHECK_THROWS_AS(validate_instrument(incomplete), ValidationError);
}

}  // TEST_SUITE
