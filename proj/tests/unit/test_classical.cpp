#include <doctest.h>

#include "../helpers.hpp"
#include "ssclab/classical.hpp"
#include "ssclab/entropics.hpp"

using namespace ssclab;
using namespace testutil;

namespace {

MarkovPair identity_pair(std::size_t nx, std::size_t nu_trivial = 1) {
    MarkovPair mp{Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(nx)),
                  Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(nu_trivial))};
    return mp;
}

// I(X:Y) - I(X:Z) straight from the table.
double direct_gap(const JointDistribution& p) {
    const auto [nx, ny, nz] = p.dims;
    std::vector<double> px(nx, 0), py(ny, 0), pz(nz, 0), pxy(nx * ny, 0), pxz(nx * nz, 0);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t z = 0; z < nz; ++z) {
                const double v = p.p(x, y, z);
                px[x] += v;
                py[y] += v;
                pz[z] += v;
                pxy[x * ny + y] += v;
                pxz[x * nz + z] += v;
            }
    const double ixy = shannon_entropy(px) + shannon_entropy(py) - shannon_entropy(pxy);
    const double ixz = shannon_entropy(px) + shannon_entropy(pz) - shannon_entropy(pxz);
    return ixy - ixz;
}

}  // namespace

TEST_SUITE("classical") {

TEST_CASE("distribution parsing and validation") {
    const json j = {{"dims", {2, 2, 1}}, {"probs", {0.5, 0.0, 0.0, 0.5}}};
    const auto p = distribution_from_json(j);
    CHECK(p.p(1, 1, 0) == 0.5);
    CHECK_THROWS_AS(distribution_from_json(json{{"dims", {2, 2, 1}}, {"probs", {0.5, 0.5}}}), ValidationError);
    CHECK_THROWS_AS(distribution_from_json(json{{"dims", {2, 1, 1}}, {"probs", {0.7, 0.7}}}), ValidationError);
    CHECK_THROWS_AS(distribution_from_json(json{{"dims", {2, 1, 1}}, {"probs", {1.5, -0.5}}}), ValidationError);
    const MarkovPair mp = identity_pair(2);
    CHECK_NOTHROW(mp.validate());
    MarkovPair bad = mp;
    bad.chan_xv(0, 0) = 0.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    const auto back = markov_pair_from_json(to_json(mp));
    CHECK((back.chan_xv - mp.chan_xv).norm() == 0.0);
}

TEST_CASE("ck objective examples") {
    const auto perfect = preset_distribution("perfect");
    CHECK(std::abs(ck_objective(perfect, identity_pair(2)) - 1.0) < 1e-12);

    const auto copy = preset_distribution("copy");
    for (std::uint64_t s = 0; s < 30; ++s) CHECK(ck_objective(copy, random_markov_pair(2, 3, 3, s)) <= 1e-9);

    // U = V: full disclosure
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto p = random_distribution({3, 2, 2}, s);
        MarkovPair mp = random_markov_pair(3, 3, 3, s + 5);
        mp.chan_vu = Eigen::MatrixXd::Identity(3, 3);
        CHECK(std::abs(ck_objective(p, mp)) < 1e-12);
        CHECK(std::abs(ck_objective(p, identity_pair(3)) - direct_gap(p)) < 1e-12);
    }
    CHECK_THROWS_AS(ck_objective(perfect, identity_pair(3)), ValidationError);
}

TEST_CASE("data processing with independent Eve") {
    const auto p = preset_distribution("bsc", 0.2);
    const double ixy = direct_gap(p);
    for (std::uint64_t s = 0; s < 50; ++s) CHECK(ck_objective(p, random_markov_pair(2, 3, 2, s)) <= ixy + 1e-12);
}

TEST_CASE("chain identity") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto p = random_distribution({2 + s % 2, 2 + (s / 2) % 2, 3}, 100 + s);
        const auto c = chain_identity_check(p, random_markov_pair(p.dims[0], 3, 2, s));
        CHECK(c.max_gap < 1e-10);
    }
    const auto p = random_distribution({2, 2, 2}, 9);
    const MarkovPair trivial_u = identity_pair(2);
    const auto c = chain_identity_check(p, trivial_u);
    CHECK(std::abs(c.lhs - direct_gap(p)) < 1e-12);
    MarkovPair vu = random_markov_pair(2, 2, 2, 3);
    vu.chan_vu = Eigen::MatrixXd::Identity(2, 2);
    const auto c2 = chain_identity_check(p, vu);
    CHECK(std::abs(c2.lhs) < 1e-12);
    CHECK(std::abs(c2.rhs) < 1e-12);
}

TEST_CASE("rate search") {
    CkSearchConfig cfg;
    cfg.restarts = 4;
    cfg.threads = 1;
    const auto a = ck_rate_search(preset_distribution("perfect"), cfg, 1);
    CHECK(a.value >= 1.0 - 1e-6);
    CHECK(std::abs(ck_objective(preset_distribution("perfect"), a.best) - a.value) < 1e-10);
    CHECK(ck_rate_search(preset_distribution("copy"), cfg, 1).value <= 1e-6);
    const auto b = ck_rate_search(preset_distribution("bsc", 0.1), cfg, 1);
    CHECK(b.value >= 1.0 - h2(0.1) - 1e-3);

    cfg.threads = 3;
    const auto b2 = ck_rate_search(preset_distribution("bsc", 0.1), cfg, 1);
    CHECK(b2.value == b.value);
    CHECK(to_json(b2).dump() == to_json(b).dump());
}

}  // TEST_SUITE
