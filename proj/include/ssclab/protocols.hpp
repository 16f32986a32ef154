#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssclab/capacities.hpp"
#include "ssclab/qcore.hpp"

namespace ssclab {

// ---- private bits --------------------------------------------------------------

enum class TwistKind { Identity, Swap, Random };
enum class ShieldKind { MaximallyMixed, Flower, Random };

/// Twisted maximally entangled key: gamma = sum_ij |ii><jj|/k (x) U_i sigma U_j^dagger.
/// Registers: key, shield (Alice), key_B, shield_B (Bob).
struct PbitSpec {
    std::size_t key_dim = 2;
    std::size_t shield_a = 2;
    std::size_t shield_b = 2;
    TwistKind twist = TwistKind::Swap;
    ShieldKind shield = ShieldKind::Flower;
    std::optional<LabeledState> shield_state;  // over (shield, shield_B); overrides `shield`
    std::vector<Mat> twist_unitaries;           // one per key value; overrides `twist`
};

LabeledState make_pbit(const PbitSpec& spec, std::uint64_t seed = 0);
/// Largest deviation of the measured key distribution from perfectly correlated uniform.
double key_correlation_defect(const LabeledState& gamma, const std::string& key_a = "key",
                              const std::string& key_b = "key_B");
std::string to_string(TwistKind t);
std::string to_string(ShieldKind s);
TwistKind twist_from_string(const std::string& s);
ShieldKind shield_from_string(const std::string& s);

// ---- superactivation mechanics ---------------------------------------------------

struct SuperactivationReport {
    double coh_pre = 0.0;            // I(a> B)
    double coh_branch_kept = 0.0;    // I(a> B alpha)
    double coh_branch_erased = 0.0;  // I(a> B)
    double coh_post = 0.0;           // I(a> B b) after the erasure channel
    double wmi_half_mi = 0.0;        // 1/2 I(a:B)
    double duality_rhs = 0.0;        // 1/2 (I(a> B) - I(a> E))
    double a_e_mutual_info = 0.0;    // I(a:E)
    double flag_gap = 0.0;
    double duality_gap = 0.0;
};

/// a and alpha are Alice's registers, bob Bob's; everything else (plus a purification) is Eve.
SuperactivationReport superactivation_run(const LabeledState& psi, const Labels& a, const Labels& alpha, const Labels& bob);

// ---- perfect weak mutual independence -------------------------------------------

struct PerfectWmiResult {
    IsometryMap U;           // alpha B -> abar ebar
    double residual = 0.0;   // trace distance of U|psi> to |phi_a abar> (x) |chi_E ebar>
    double deviation = 0.0;  // measured || psi_aE - psi_a (x) psi_E || (halved)
    double unitarity = 0.0;  // max |U^dagger U - I|
};

PerfectWmiResult perfect_wmi_isometry(const LabeledState& psi, const Labels& a, const Labels& alpha, const Labels& bob,
                                      const Labels& eve, double tol_in = 1e-8);
/// Pure state over a, alpha, B, E with rho_aE = rho_a (x) rho_E exactly: a random
/// |phi_a abar> (x) |chi_E ebar> with abar ebar embedded into alpha B by a random isometry.
LabeledState decoupled_instance(std::size_t da, std::size_t dalpha, std::size_t db, std::size_t de, std::uint64_t seed);
/// || rho_aE - rho_a (x) rho_E || (halved trace norm).
double decoupling_deviation(const LabeledState& psi, const Labels& a, const Labels& eve);

// ---- typicality and decoupling ---------------------------------------------------

/// Per-copy spectral typicality: index strings x with |-(1/n) log2 lambda_x - H(lambda)| <= eps.
struct TypicalSet {
    std::vector<std::size_t> indices;  // flat indices over n copies, ascending
    double mass = 0.0;
    double entropy = 0.0;
};
TypicalSet typical_set(const std::vector<double>& spectrum, std::size_t n, double eps);

struct DecouplingRunReport {
    std::size_t n = 0;
    double epsilon = 0.0;
    std::size_t dim_a1 = 1;
    std::size_t dim_a2 = 1;
    std::size_t typical_dim = 0;
    double trace_distance = 0.0;
    double typical_mass = 0.0;
    double mutual_info = 0.0;  // I(A:E) of one copy
    std::uint64_t seed = 0;
};

/// psi_AE pure over exactly two subsystems; A is the first.
DecouplingRunReport decoupling_experiment(const LabeledState& psi_ae, std::size_t n, double epsilon, std::uint64_t seed);

struct WmiRunReport {
    std::size_t n = 0;
    double rate = 0.0;               // 1/(2n) I(a1 : B^n alpha^n)
    double residual_mi = 0.0;        // I(a1 : E^n alphabar^n)
    double residual_distance = -1.0;  // || rho_a1E - rho_a1 (x) rho_E ||, -1 when too large to form
    double single_copy_G = 0.0;      // eval_G(psi, inst)
    double deficit = 0.0;            // single_copy_G - rate
    double typical_mass = 0.0;
    std::size_t typical_dim = 0;
    std::size_t dim_a1 = 1;
    std::size_t dim_a2 = 1;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

/// Finite-n run of the flag / typical projection / split protocol.
WmiRunReport wmi_lower_bound_protocol(const LabeledState& psi, const Parties& parties, const Instrument& inst,
                                      std::size_t n, double epsilon, std::uint64_t seed);

json to_json(const SuperactivationReport& r);
json to_json(const PerfectWmiResult& r);
json to_json(const DecouplingRunReport& r);
json to_json(const WmiRunReport& r);

}  // namespace ssclab
