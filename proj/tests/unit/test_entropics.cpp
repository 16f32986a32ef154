#include <doctest.h>

#include "../helpers.hpp"
#include "ssclab/entropics.hpp"

using namespace ssclab;
using namespace testutil;

TEST_SUITE("entropics") {

TEST_CASE("entropy examples") {
    CHECK(std::abs(entropy(maximally_mixed({{"A", 4}}), {"A"}) - 2.0) < 1e-12);
    const auto psi = random_pure_state({{"A", 3}, {"B", 2}}, 1);
    CHECK(std::abs(entropy(psi, {"A", "B"})) < 1e-9);
    // Bell-diagonal with weights (1/2, 1/2, 0, 0)
    const auto phi_p = ket({{"A", 2}, {"B", 2}}, {{0, 1.0}, {3, 1.0}});
    const auto phi_m = ket({{"A", 2}, {"B", 2}}, {{0, 1.0}, {3, -1.0}});
    const Mat bd = 0.5 * (phi_p.density() + phi_m.density());
    CHECK(std::abs(entropy(LabeledState::mixed({{"A", 2}, {"B", 2}}, bd), {"A", "B"}) - 1.0) < 1e-12);
}

TEST_CASE("entropy report clips small negative eigenvalues and rejects large ones") {
    Eigen::VectorXd ev(3);
    ev << 0.5, 0.5 + 5e-11, -5e-11;
    const EntropyReport r = entropy_of_spectrum(ev);
    CHECK(r.clipped_mass == doctest::Approx(5e-11));
    CHECK(std::abs(r.value - 1.0) < 1e-9);
    ev << 0.6, 0.5, -0.1;
    CHECK_THROWS_AS(entropy_of_spectrum(ev), ValidationError);
}

TEST_CASE("mutual information examples") {
    CHECK(std::abs(mutual_information(maximally_entangled(2), {"A"}, {"B"}) - 2.0) < 1e-12);
    CHECK(std::abs(mutual_information(basis_state({{"A", 2}, {"B", 3}}, 4), {"A"}, {"B"})) < 1e-12);
    Mat cc = Mat::Zero(4, 4);
    cc(0, 0) = cc(3, 3) = 0.5;
    CHECK(std::abs(mutual_information(LabeledState::mixed({{"A", 2}, {"B", 2}}, cc), {"A"}, {"B"}) - 1.0) < 1e-12);
    CHECK_THROWS_AS(mutual_information(maximally_entangled(2), {"A"}, {"A"}), ValidationError);
}

TEST_CASE("conditional mutual information") {
    const auto psi = random_pure_state({{"A", 2}, {"B", 2}, {"C", 1}, {"D", 2}}, 4);
    CHECK(std::abs(conditional_mutual_information(psi, {"A"}, {"B"}, {"C"}) - mutual_information(psi, {"A"}, {"B"})) < 1e-12);

    const auto ghz = ket({{"A", 2}, {"B", 2}, {"C", 2}}, {{0, 1.0}, {7, 1.0}});
    CHECK(std::abs(conditional_mutual_information(ghz, {"A"}, {"B"}, {"C"}) - 1.0) < 1e-12);

    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto p = random_pure_state({{"A", 2}, {"B", 2}, {"C", 2}}, 40 + s);
        const double lhs = mutual_information(p, {"A"}, {"B", "C"});
        const double rhs = mutual_information(p, {"A"}, {"C"}) + conditional_mutual_information(p, {"A"}, {"B"}, {"C"});
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
    CHECK_THROWS_AS(conditional_mutual_information(ghz, {"A"}, {"B"}, {"B"}), ValidationError);
}

TEST_CASE("strong subadditivity on random mixed states") {
    for (std::uint64_t s = 0; s < 500; ++s) {
        const auto mixed = partial_trace(random_pure_state({{"A", 2}, {"B", 2}, {"C", 2}, {"R", 3}}, 1000 + s), {"R"});
        CHECK(conditional_mutual_information(mixed, {"A"}, {"B"}, {"C"}) >= -1e-9);
    }
}

TEST_CASE("coherent information and duality") {
    CHECK(std::abs(coherent_information(maximally_entangled(2), {"A"}, {"B"}) - 1.0) < 1e-12);
    CHECK(std::abs(coherent_information(basis_state({{"A", 2}, {"B", 2}}, 0), {"A"}, {"B"})) < 1e-12);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto p = random_pure_state({{"a", 2}, {"B", 3}, {"E", 2}}, 300 + s);
        CHECK(std::abs(coherent_information(p, {"a"}, {"B"}) + coherent_information(p, {"a"}, {"E"})) < 1e-10);
    }
}

TEST_CASE("unitary invariance and the chain-rule dimension bound") {
    const Mat u = random_isometry_matrix(4, 4, 2);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Mat r = random_density(4, 3, s);
        const double a = entropy(LabeledState::mixed({{"A", 4}}, r), {"A"});
        const double b = entropy(LabeledState::mixed({{"A", 4}}, u * r * u.adjoint()), {"A"});
        CHECK(std::abs(a - b) < 1e-10);
        const auto p = random_pure_state({{"a1", 2}, {"a2", 2}, {"B", 3}, {"E", 3}}, 700 + s);
        CHECK(conditional_mutual_information(p, {"a2"}, {"B"}, {"a1"}) <= 2.0 + 1e-9);
    }
}

TEST_CASE("shannon entropy") {
    CHECK(std::abs(shannon_entropy({0.5, 0.5}) - 1.0) < 1e-15);
    CHECK(std::abs(shannon_entropy({0.1, 0.9}) - h2(0.1)) < 1e-15);
    CHECK(shannon_entropy({1.0, 0.0}) == 0.0);
}

}  // TEST_SUITE
