#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ssclab/serialize.hpp"

namespace ssclab {

// P_XYZ over finite alphabets, row-major in (x, y, z).
struct JointDistribution {
    std::array<std::size_t, 3> dims{1, 1, 1};
    std::vector<double> probs;

    double p(std::size_t x, std::size_t y, std::size_t z) const { return probs[(x * dims[1] + y) * dims[2] + z]; }
    void validate(double tol = 1e-12) const;
};

// X -> V -> U, both row-stochastic.
struct MarkovPair {
    Eigen::MatrixXd chan_xv;
    Eigen::MatrixXd chan_vu;

    void validate(double tol = 1e-12) const;
};

JointDistribution distribution_from_json(const json& j);
json to_json(const JointDistribution& p);
MarkovPair markov_pair_from_json(const json& j);
json to_json(const MarkovPair& mp);

/// "perfect": X = Y uniform bit, Z independent; "copy": X = Y = Z; "bsc": Y = X flipped with probability `flip`.
JointDistribution preset_distribution(const std::string& name, double flip = 0.1);
JointDistribution random_distribution(std::array<std::size_t, 3> dims, std::uint64_t seed);
MarkovPair random_markov_pair(std::size_t nx, std::size_t nv, std::size_t nu, std::uint64_t seed);

double ck_objective(const JointDistribution& p, const MarkovPair& mp);

struct ChainCheck {
    double lhs = 0.0;  // I(V:YU) - I(V:ZU)
    double rhs = 0.0;  // I(V:Y|U) - I(V:Z|U)
    double max_gap = 0.0;
};
ChainCheck chain_identity_check(const JointDistribution& p, const MarkovPair& mp);

struct CkSearchConfig {
    std::size_t cap_v = 0;  // 0: |X| + 1
    std::size_t cap_u = 0;
    std::size_t restarts = 8;
    std::size_t max_iters = 400;
    double init_step = 0.25;
    double tol = 1e-9;
    std::size_t threads = 0;
};

struct CkSearchResult {
    double value = 0.0;
    MarkovPair best;
    std::size_t restart = 0;
    std::size_t iterations = 0;
    bool converged = false;
};

CkSearchResult ck_rate_search(const JointDistribution& p, const CkSearchConfig& cfg, std::uint64_t seed);

json to_json(const CkSearchResult& r);
json to_json(const ChainCheck& c);

}  // namespace ssclab
