#include "ssclab/channels.hpp"

#include <cmath>

namespace ssclab {

std::size_t ss_pair_index(std::size_t i, std::size_t j, std::size_t d) {
    if (i > j) std::swap(i, j);
    if (j >= d) throw ValidationError("ss_pair_index: index out of range");
    // rows 0..i-1 contribute d, d-1, ..., d-i+1 pairs
    return i * d - i * (i - 1) / 2 + (j - i);
}

Mat ss_isometry_matrix(std::size_t d) {
    if (d < 1) throw ValidationError("symmetric-side isometry needs d >= 1");
    const auto n = static_cast<Eigen::Index>(d * (d + 1) / 2);
    const auto dd = static_cast<Eigen::Index>(d);
    Mat m = Mat::Zero(dd * dd, n);
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < dd; ++i) {
        for (Eigen::Index j = i; j < dd; ++j) {
            const auto c = static_cast<Eigen::Index>(ss_pair_index(static_cast<std::size_t>(i), static_cast<std::size_t>(j), d));
            if (i == j) {
                m(i * dd + i, c) = 1.0;
            } else {
                m(i * dd + j, c) = r;
                m(j * dd + i, c) = r;
            }
        }
    }
    return m;
}

QuantumChannel build_ss(std::size_t d) {
    if (d < 2) throw ValidationError("build_ss: d must be at least 2", "d");
    return QuantumChannel(IsometryMap({{"A", d * (d + 1) / 2}}, {{"B", d}, {"E", d}}, ss_isometry_matrix(d)), {"E"});
}

Mat erasure_isometry_matrix(std::size_t d) {
    if (d < 1) throw ValidationError("erasure isometry needs d >= 1");
    const auto o = static_cast<Eigen::Index>(d + 1);
    const auto e = static_cast<Eigen::Index>(d);
    Mat m = Mat::Zero(o * o, e);
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < e; ++i) {
        m(i * o + e, i) = r;
        m(e * o + i, i) = r;
    }
    return m;
}

QuantumChannel build_erasure(std::size_t d) {
    if (d < 2) throw ValidationError("build_erasure: d must be at least 2", "d");
    return QuantumChannel(IsometryMap({{"A", d}}, {{"B", d + 1}, {"E", d + 1}}, erasure_isometry_matrix(d)), {"E"});
}

ErasureSimulation simulate_erasure_via_ss(std::size_t d) {
    if (d < 2) throw ValidationError("simulate_erasure_via_ss: d must be at least 2", "d");
    const std::size_t s = (d + 1) * (d + 2) / 2;
    Mat enc = Mat::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) enc(static_cast<Eigen::Index>(ss_pair_index(i, d, d + 1)), static_cast<Eigen::Index>(i)) = 1.0;
    IsometryMap encoder({{"A", d}}, {{"S", s}}, std::move(enc));
    QuantumChannel ss = build_ss(d + 1).relabeled({{"A", "S"}});
    QuantumChannel composite = compose(ss, isometry_channel(encoder));
    const double dist = choi_distance(composite, build_erasure(d));
    return {std::move(encoder), std::move(composite), dist};
}

QuantumChannel random_channel(std::size_t in_dim, std::size_t out_dim, std::size_t env_dim, std::uint64_t seed) {
    if (out_dim * env_dim < in_dim) throw ValidationError("random_channel: output x environment smaller than input");
    return QuantumChannel(IsometryMap({{"A", in_dim}}, {{"B", out_dim}, {"E", env_dim}},
                                      random_isometry_matrix(in_dim, out_dim * env_dim, seed), 1e-9),
                          {"E"});
}

AntidegradabilityWitness check_antidegradable(const QuantumChannel& ch, const QuantumChannel& candidate) {
    const QuantumChannel comp = complementary_channel(ch);
    if (candidate.input_dim() != comp.output_dim()) {
        throw ValidationError("check_antidegradable: candidate input dimension " + std::to_string(candidate.input_dim()) +
                              " does not match environment dimension " + std::to_string(comp.output_dim()));
    }
    if (candidate.output_dim() != ch.output_dim()) {
        throw ValidationError("check_antidegradable: candidate output dimension " + std::to_string(candidate.output_dim()) +
                              " does not match channel output dimension " + std::to_string(ch.output_dim()));
    }
    const QuantumChannel sim = compose(candidate, comp);
    return {ch, candidate, choi_distance(ch, sim)};
}

}  // namespace ssclab
