#include <doctest.h>

#include "../helpers.hpp"
#include "ssclab/channels.hpp"
#include "ssclab/classical.hpp"
#include "ssclab/entropics.hpp"
#include "ssclab/protocols.hpp"

using namespace ssclab;
using namespace testutil;

// Closed-form values worked out by hand.
TEST_SUITE("oracle") {

TEST_CASE("binary entropy at 0.1") {
    CHECK(shannon_entropy({0.9, 0.1}) == doctest::Approx(0.46899559358928122).epsilon(1e-14));
    CHECK(shannon_entropy({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("trace distance between |0> and |+>") {
    const auto zero = basis_state({{"A", 2}}, 0);
    const auto plus = ket({{"A", 2}}, {{0, 1.0}, {1, 1.0}});
    CHECK(std::abs(trace_distance(zero, plus) - std::sqrt(2.0) / 2) < 1e-14);
}

TEST_CASE("Bell mixture entropies") {
    // p |Phi+><Phi+| + (1-p) |Phi-><Phi-|: joint entropy h(p), marginals 1 bit
    const double p = 0.1;
    const Vec phip = ket({{"A", 2}, {"B", 2}}, {{0, 1.0}, {3, 1.0}}).amplitudes();
    const Vec phim = ket({{"A", 2}, {"B", 2}}, {{0, 1.0}, {3, -1.0}}).amplitudes();
    const Mat rho = p * phip * phip.adjoint() + (1 - p) * phim * phim.adjoint();
    const auto s = LabeledState::mixed({{"A", 2}, {"B", 2}}, rho);
    CHECK(std::abs(entropy(s, {"A", "B"}) - h2(p)) < 1e-12);
    CHECK(std::abs(mutual_information(s, {"A"}, {"B"}) - (2 - h2(p))) < 1e-12);
    CHECK(std::abs(coherent_information(s, {"A"}, {"B"}) - (1 - h2(p))) < 1e-12);
}

TEST_CASE("GHZ correlations") {
    const auto ghz = ket({{"A", 2}, {"B", 2}, {"C", 2}}, {{0, 1.0}, {7, 1.0}});
    CHECK(std::abs(mutual_information(ghz, {"A"}, {"B"}) - 1.0) < 1e-12);
    CHECK(std::abs(conditional_mutual_information(ghz, {"A"}, {"B"}, {"C"}) - 1.0) < 1e-12);
    CHECK(std::abs(mutual_information(ghz, {"A"}, {"B", "C"}) - 2.0) < 1e-12);
}

TEST_CASE("symmetric-side channel on pair inputs") {
    const auto ss = build_ss(2);
    CHECK(ss.input_dim() == 3);
    // diagonal pair |00> lands on a product state; the off-diagonal pair on a Bell state
    const auto diag = apply_channel(isometry_channel(ss.stinespring()), basis_state({{"A", 3}}, ss_pair_index(0, 0, 2)), {"A"});
    CHECK(std::abs(entropy(diag, {"B"})) < 1e-12);
    const auto off = apply_channel(isometry_channel(ss.stinespring()), basis_state({{"A", 3}}, ss_pair_index(0, 1, 2)), {"A"});
    CHECK(std::abs(entropy(off, {"B"}) - 1.0) < 1e-12);
    // self-complementarity forces zero coherent information for every input
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto psi = random_pure_state({{"R", 3}, {"A", 3}}, s);
        const auto out = apply_channel(ss, psi, {"A"});
        CHECK(std::abs(coherent_information(out, {"R"}, {"B"})) < 1e-10);
    }
}

TEST_CASE("erasure channel with flag probability one half") {
    const auto out = apply_channel(build_erasure(2), maximally_entangled(2, "R", "A"), {"A"});
    CHECK(std::abs(mutual_information(out, {"R"}, {"B"}) - 1.0) < 1e-12);
    CHECK(std::abs(coherent_information(out, {"R"}, {"B"})) < 1e-12);
}

TEST_CASE("flower pbit: no coherent information before, one half after") {
    const auto g = make_pbit({}, 0);
    const auto r = superactivation_run(g, {"key"}, {"shield"}, {"key_B", "shield_B"});
    CHECK(std::abs(r.coh_pre) < 1e-12);
    CHECK(std::abs(r.coh_post - 0.5) < 1e-9);
}

TEST_CASE("decoupling of a product state") {
    const auto prod = basis_state({{"A", 3}, {"E", 2}}, 0);
    const auto r = decoupling_experiment(prod, 3, 0.3, 5);
    CHECK(r.trace_distance < 1e-12);
    CHECK(std::abs(r.mutual_info) < 1e-12);
}

TEST_CASE("classical secret-key objective on presets") {
    MarkovPair id;
    id.chan_xv = Eigen::MatrixXd::Identity(2, 2);
    id.chan_vu = Eigen::MatrixXd::Constant(2, 1, 1.0);
    // I(V:Y|U) - I(V:Z|U) with V = X, U trivial
    CHECK(std::abs(ck_objective(preset_distribution("perfect"), id) - 1.0) < 1e-12);
    CHECK(std::abs(ck_objective(preset_distribution("copy"), id)) < 1e-12);
    CHECK(std::abs(ck_objective(preset_distribution("bsc", 0.1), id) - (1 - h2(0.1))) < 1e-12);
}

}  // TEST_SUITE
