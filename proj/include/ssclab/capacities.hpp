#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ssclab/qcore.hpp"
#include "ssclab/serialize.hpp"

namespace ssclab {

/// Who holds which subsystem. Every label of the state belongs to exactly one party.
struct Parties {
    Labels alice, bob, eve;
};

/// "B" or "*_B" -> Bob, "E" or "*_E" -> Eve, anything else -> Alice. Overrides win.
Parties infer_parties(const LabeledState& s, const Labels& alice = {}, const Labels& bob = {});
/// Checks the partition; a mixed state is purified into a fresh Eve register.
LabeledState prepare_pure(const LabeledState& s, Parties& parties);

/// Isometry from Alice's registers to named outputs [a, alpha] or [a, alpha1, alpha2].
struct SplittingCertificate {
    IsometryMap isometry;

    std::vector<std::size_t> dims() const;
};

/// The identity split: a = `a_labels`, alpha = Alice's remaining registers.
SplittingCertificate natural_split(const LabeledState& s, const Parties& p, const Labels& a_labels);
SplittingCertificate split_from_matrix(const LabeledState& s, const Parties& p, const Mat& m,
                                       const std::vector<std::size_t>& out_dims);

/// 1/2 (I(a:B) - I(a:E)) of the split state.
double eval_zero_way_wmi(const LabeledState& psi, const Parties& p, const SplittingCertificate& split);
/// I(a> B b) with alpha sent through the fifty-fifty erasure channel into b.
double eval_erasure_coherent(const LabeledState& psi, const Parties& p, const SplittingCertificate& split);

struct PropositionCheck {
    double lhs = 0.0;  // erasure-assisted coherent information
    double mid = 0.0;  // 1/2 I(a> B alpha) + 1/2 I(a> B)
    double rhs = 0.0;  // 1/2 (I(a:B) - I(a:E))
    double max_gap = 0.0;
};
PropositionCheck proposition_identity_check(const LabeledState& psi, const Parties& p, const SplittingCertificate& split);

/// alpha embedded into the symmetric-side channel of local dimension ss_dim
/// (0 -> |alpha| + 1, which reproduces the erasure encoding);
/// returns 1/2 (I(a:B|alpha_B) - I(a:E|alpha_E)).
double eval_ss_assisted(const LabeledState& psi, const Parties& p, const SplittingCertificate& split,
                        std::size_t ss_dim = 0);
/// Input basis of ss(d) used for alpha: erasure pairs (i, d-1) first, then the rest lexicographically.
Mat ss_embedding(std::size_t alpha_dim, std::size_t d);

/// 1/2 (I(a:B|alpha) - I(a:E|alpha-bar)) for the flagged post-instrument state.
double eval_G(const LabeledState& psi, const Parties& p, const Instrument& inst);
/// 1/2 [I(a : lambda(alpha1) B) - I(a : lambda^c(alpha1) E)]; alpha2 is discarded.
double eval_G_general(const QuantumChannel& lambda, const LabeledState& psi, const Parties& p,
                      const SplittingCertificate& split);

// ---- instrument parametrization ---------------------------------------------

/// W: A -> a (x) K (x) M for CP, a (x) K for RO, K (x) a (x) r for QC.
struct InstrumentShape {
    InstrumentClass cls = InstrumentClass::CP;
    std::size_t a_dim = 2;
    std::size_t branches = 2;
    std::size_t kraus = 2;  // per branch; ignored for RO

    std::size_t param_dim() const;
};
Instrument instrument_from_isometry(const Mat& w, const InstrumentShape& shape);
/// Stacks sqrt(p_k) K_kj into a CP-shaped isometry; throws when the shape is too small.
Mat cp_isometry_from_instrument(const Instrument& inst, const InstrumentShape& shape);

// ---- optimizer ---------------------------------------------------------------

enum class Objective { ZeroWayWmi, ErasureCoherent, SsAssisted, G, GGeneral };
std::string to_string(Objective o);
Objective objective_from_string(const std::string& s);

struct ObjectiveSpec {
    Objective id = Objective::ZeroWayWmi;
    InstrumentClass cls = InstrumentClass::CP;  // G only
    std::size_t ss_dim = 0;                      // SsAssisted only
    std::optional<QuantumChannel> lambda;        // GGeneral only
};

struct OptimizerConfig {
    std::uint64_t seed = 0;
    std::size_t restarts = 16;
    std::size_t max_iters = 500;
    double init_step = 0.1;
    double shrink = 0.5;
    double tol = 1e-7;
    /// Split objectives: (|a|, |alpha|) (|alpha2| for GGeneral). G: (|a|, branch count).
    std::vector<std::pair<std::size_t, std::size_t>> ancilla_dims;
    std::size_t kraus = 2;    // G with CP/QC classes
    std::size_t threads = 0;  // 0 -> SSCLAB_THREADS or hardware concurrency

    void validate() const;
};

using Certificate = std::variant<Instrument, SplittingCertificate>;

struct DimBest {
    std::pair<std::size_t, std::size_t> dims;
    double value = 0.0;
    bool skipped = false;
};

struct RateEstimate {
    std::string objective_name;
    double value = 0.0;
    Certificate certificate;
    std::pair<std::size_t, std::size_t> dims;
    std::uint64_t seed = 0;
    std::size_t restarts_used = 0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<DimBest> per_dim;
    std::vector<double> trace;  // best value after each sweep of the winning restart
};

double evaluate(const ObjectiveSpec& obj, const LabeledState& psi, const Parties& p, const Certificate& cert);

/// Multi-start derivative-free search. `seeds` become the first restarts of
/// every dimension they fit. Deterministic for a given cfg.seed.
RateEstimate maximize(const ObjectiveSpec& obj, const LabeledState& psi, const Parties& p, const OptimizerConfig& cfg,
                      const std::vector<Certificate>& seeds = {});

/// Low-level engine: maximizes f over isometries in -> out by Givens and phase moves.
struct SearchResult {
    Mat best;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t restart = 0;
    std::vector<double> trace;
};
SearchResult search_isometry(const std::function<double(const Mat&)>& f, std::size_t in, std::size_t out,
                             const OptimizerConfig& cfg, std::uint64_t seed, const std::vector<Mat>& starts = {});

std::size_t resolve_threads(std::size_t requested);

json to_json(const SplittingCertificate& c);
json to_json(const RateEstimate& r, const ObjectiveSpec& obj);
SplittingCertificate split_certificate_from_json(const json& j, const std::string& path);

}  // namespace ssclab
