#include <cmath>
#include <random>

#include "ssclab/classical.hpp"

namespace ssclab {

namespace {

void check_stochastic(const Eigen::MatrixXd& m, const char* name, double tol) {
    if (m.rows() < 1 || m.cols() < 1) throw ValidationError(std::string(name) + " is empty", name);
    if (!m.allFinite() || m.minCoeff() < 0.0) throw ValidationError(std::string(name) + " has negative entries", name);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (std::abs(m.row(r).sum() - 1.0) > tol) {
            throw ValidationError(std::string(name) + " row " + std::to_string(r) + " does not sum to 1", name);
        }
    }
}

Eigen::MatrixXd matrix_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].empty()) {
        throw ValidationError(std::string("missing matrix '") + key + "'", std::string("$.") + key);
    }
    const auto& rows = j[key];
    const std::size_t nc = rows[0].is_array() ? rows[0].size() : 0;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(nc));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string path = std::string("$.") + key + "[" + std::to_string(r) + "]";
        if (!rows[r].is_array() || rows[r].size() != nc) throw ValidationError("ragged matrix row", path);
        for (std::size_t c = 0; c < nc; ++c) {
            if (!rows[r][c].is_number()) throw ValidationError("matrix entry is not a number", path);
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
        }
    }
    return m;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

void JointDistribution::validate(double tol) const {
    for (auto d : dims) {
        if (d < 1) throw ValidationError("distribution alphabet sizes must be positive", "$.dims");
    }
    if (probs.size() != dims[0] * dims[1] * dims[2]) {
        throw ValidationError("distribution has " + std::to_string(probs.size()) + " entries, expected " +
                                  std::to_string(dims[0] * dims[1] * dims[2]),
                              "$.probs");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= 0.0)) throw ValidationError("negative probability", "$.probs[" + std::to_string(i) + "]");
        total += probs[i];
    }
    if (std::abs(total - 1.0) > tol) throw ValidationError("probabilities sum to " + std::to_string(total), "$.probs");
}

void MarkovPair::validate(double tol) const {
    check_stochastic(chan_xv, "chanXV", tol);
    check_stochastic(chan_vu, "chanVU", tol);
    if (chan_xv.cols() != chan_vu.rows()) throw ValidationError("chanXV columns must match chanVU rows", "chanVU");
}

JointDistribution distribution_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("distribution must be a JSON object", "$");
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 3) {
        throw ValidationError("dims must be [x, y, z]", "$.dims");
    }
    if (!j.contains("probs") || !j["probs"].is_array()) throw ValidationError("missing probs array", "$.probs");
    JointDistribution p;
    for (std::size_t i = 0; i < 3; ++i) {
        const json& d = j["dims"][i];
        if (!d.is_number_integer() || d.get<long long>() < 1) throw ValidationError("dims entries must be positive integers", "$.dims");
        p.dims[i] = d.get<std::size_t>();
    }
    for (std::size_t i = 0; i < j["probs"].size(); ++i) {
        if (!j["probs"][i].is_number()) throw ValidationError("probability is not a number", "$.probs[" + std::to_string(i) + "]");
        p.probs.push_back(j["probs"][i].get<double>());
    }
    p.validate();
    return p;
}

json to_json(const JointDistribution& p) { return {{"dims", p.dims}, {"probs", p.probs}}; }

MarkovPair markov_pair_from_json(const json& j) {
    MarkovPair mp{matrix_field(j, "chanXV"), matrix_field(j, "chanVU")};
    mp.validate();
    return mp;
}

json to_json(const MarkovPair& mp) { return {{"chanXV", matrix_json(mp.chan_xv)}, {"chanVU", matrix_json(mp.chan_vu)}}; }

JointDistribution preset_distribution(const std::string& name, double flip) {
    JointDistribution p;
    p.dims = {2, 2, 2};
    p.probs.assign(8, 0.0);
    auto at = [&](std::size_t x, std::size_t y, std::size_t z) -> double& { return p.probs[(x * 2 + y) * 2 + z]; };
    if (name == "perfect") {
        for (std::size_t x = 0; x < 2; ++x) at(x, x, 0) = at(x, x, 1) = 0.25;
    } else if (name == "copy") {
        for (std::size_t x = 0; x < 2; ++x) at(x, x, x) = 0.5;
    } else if (name == "bsc") {
        if (!(flip >= 0.0 && flip <= 1.0)) throw ValidationError("flip probability must lie in [0, 1]", "flip");
        for (std::size_t x = 0; x < 2; ++x) {
            for (std::size_t z = 0; z < 2; ++z) {
                at(x, x, z) = 0.25 * (1.0 - flip);
                at(x, 1 - x, z) = 0.25 * flip;
            }
        }
    } else {
        throw ValidationError("unknown distribution preset '" + name + "'", "preset");
    }
    return p;
}

JointDistribution random_distribution(std::array<std::size_t, 3> dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> ex(1.0);
    JointDistribution p;
    p.dims = dims;
    p.probs.resize(dims[0] * dims[1] * dims[2]);
    double total = 0.0;
    for (auto& v : p.probs) total += (v = ex(rng));
    for (auto& v : p.probs) v /= total;
    p.validate(1e-9);
    return p;
}

MarkovPair random_markov_pair(std::size_t nx, std::size_t nv, std::size_t nu, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> ex(1.0);
    auto make = [&](std::size_t r, std::size_t c) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = ex(rng);
            m.row(i) /= m.row(i).sum();
        }
        return m;
    };
    MarkovPair mp{make(nx, nv), make(nv, nu)};
    return mp;
}

}  // namespace ssclab
