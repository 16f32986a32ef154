#pragma once

#include <cstdint>

#include "ssclab/qcore.hpp"

namespace ssclab {

/// Input basis index of the symmetric pair (i, j), i <= j, lexicographic.
std::size_t ss_pair_index(std::size_t i, std::size_t j, std::size_t d);
/// Columns |(i,j)> of the symmetric-subspace isometry, d(d+1)/2 of them (d >= 1).
Mat ss_isometry_matrix(std::size_t d);

/// U|i> = (|i,d> + |d,i>)/sqrt(2) for i < d (d >= 1).
Mat erasure_isometry_matrix(std::size_t d);

/// Symmetric-side channel A -> B with environment E, both of dimension d >= 2.
QuantumChannel build_ss(std::size_t d);
/// Fifty-fifty erasure channel A -> B with flag |d>, environment E of dimension d+1.
QuantumChannel build_erasure(std::size_t d);

struct ErasureSimulation {
    IsometryMap encoder;        // A (d) -> S ((d+1)(d+2)/2)
    QuantumChannel composite;   // ss(d+1) after the encoder
    double choi_distance = 0.0;  // against build_erasure(d)
};
ErasureSimulation simulate_erasure_via_ss(std::size_t d);

/// Seeded random channel with Haar Stinespring isometry.
QuantumChannel random_channel(std::size_t in_dim, std::size_t out_dim, std::size_t env_dim, std::uint64_t seed);

struct AntidegradabilityWitness {
    QuantumChannel channel;
    QuantumChannel antidegrading_map;
    double residual = 0.0;

    bool valid(double tol = 1e-6) const { return residual < tol; }
};

/// Residual = Choi distance between ch and candidate o ch^c.
AntidegradabilityWitness check_antidegradable(const QuantumChannel& ch, const QuantumChannel& candidate);

struct AntidegradableSimulation {
    std::size_t d = 0;           // local dimension of the symmetric-side channel
    QuantumChannel encoder;      // A -> S
    QuantumChannel decoder;      // Bob's side: drops G1 H1
    QuantumChannel composite;    // decoder o ss(d) o encoder
    double residual = 0.0;       // Choi distance to ch
    double symmetry_defect = 0.0;
    double rb_defect = 0.0;      // trace distance Psi_RB vs phi_RB
};

/// anti_iso: E -> F G with outputs [F, G...]; F must match the channel output dimension.
AntidegradableSimulation simulate_antidegradable_via_ss(const QuantumChannel& ch, const IsometryMap& anti_iso);

/// Natural anti-degrading isometry for self-complementary channels: E -> F with G trivial.
IsometryMap self_complementary_antidegrader(const QuantumChannel& ch);

/// W: A -> S with (1 (x) W)|psi> = |phi> given purifications laid out as
/// psi[r*dA + a], phi[r*dS + s] of the same reference marginal. Off-support
/// directions are completed isometrically.
Mat relate_purifications(const Vec& psi, std::size_t dA, const Vec& phi, std::size_t dS, std::size_t dR);

}  // namespace ssclab
