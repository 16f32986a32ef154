#pragma once

// Labeled multipartite states, isometries and channels in Stinespring form.
//
// Conventions shared by every module:
//  * flat indices are row-major over the ordered subsystem list, the first
//    subsystem being the most significant digit (plain Kronecker order);
//  * operations keep the input's label order, tensor() concatenates left to right;
//  * Choi states are (id (x) ch) applied to the normalized maximally entangled
//    state, reference first;
//  * trace_distance() is the halved trace norm.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ssclab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Labels = std::vector<std::string>;

/// Bad input: dimensions, label sets, malformed files. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what, std::string field = {})
        : std::invalid_argument(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A construction produced something its own invariants forbid.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Subsystem {
    std::string name;
    std::size_t dim = 1;

    friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

std::size_t total_dim(std::span<const Subsystem> subsystems);

// Tolerances for the value-type invariants.
inline constexpr double kStateTol = 1e-10;
inline constexpr double kInstrumentTol = 1e-8;

class LabeledState {
public:
    enum class Kind { Pure, Mixed };

    /// Checked constructors: unit norm, or Hermitian / unit trace / PSD within tol.
    static LabeledState pure(std::vector<Subsystem> subsystems, Vec amplitudes, double tol = kStateTol);
    static LabeledState mixed(std::vector<Subsystem> subsystems, Mat density, double tol = kStateTol);

    /// Trusted constructors for results of operations that preserve the invariants.
    static LabeledState pure_unchecked(std::vector<Subsystem> subsystems, Vec amplitudes);
    static LabeledState mixed_unchecked(std::vector<Subsystem> subsystems, Mat density);

    Kind kind() const noexcept { return kind_; }
    bool is_pure() const noexcept { return kind_ == Kind::Pure; }
    const std::vector<Subsystem>& subsystems() const noexcept { return subsystems_; }
    std::size_t dim() const noexcept { return dim_; }

    const Vec& amplitudes() const;
    const Mat& density_matrix() const;
    /// Density operator regardless of kind (builds |psi><psi| for pure states).
    Mat density() const;

    Labels labels() const;
    bool has(const std::string& name) const;
    std::size_t position(const std::string& name) const;
    std::size_t dim_of(const std::string& name) const;
    std::size_t dim_of(const Labels& names) const;

    LabeledState as_mixed() const;
    LabeledState relabeled(const std::map<std::string, std::string>& renames) const;

private:
    LabeledState(Kind kind, std::vector<Subsystem> subsystems, Vec amps, Mat rho);

    Kind kind_;
    std::vector<Subsystem> subsystems_;
    std::size_t dim_;
    Vec amps_;
    Mat rho_;
};

class IsometryMap {
public:
    IsometryMap(std::vector<Subsystem> inputs, std::vector<Subsystem> outputs, Mat matrix,
                double tol = kStateTol);

    const std::vector<Subsystem>& inputs() const noexcept { return inputs_; }
    const std::vector<Subsystem>& outputs() const noexcept { return outputs_; }
    const Mat& matrix() const noexcept { return matrix_; }
    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }
    std::size_t output_dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

    IsometryMap relabeled(const std::map<std::string, std::string>& renames) const;
    /// Same map with its outputs reordered (rows permuted accordingly).
    IsometryMap with_output_order(const Labels& order) const;

private:
    std::vector<Subsystem> inputs_;
    std::vector<Subsystem> outputs_;
    Mat matrix_;
};

class QuantumChannel {
public:
    QuantumChannel(IsometryMap stinespring, Labels env_labels);

    const IsometryMap& stinespring() const noexcept { return iso_; }
    const Labels& env_labels() const noexcept { return env_; }
    std::vector<Subsystem> output_subsystems() const;
    std::vector<Subsystem> env_subsystems() const;
    std::size_t input_dim() const noexcept { return iso_.input_dim(); }
    std::size_t output_dim() const;
    bool is_env(const std::string& name) const;

    QuantumChannel relabeled(const std::map<std::string, std::string>& renames) const;

private:
    IsometryMap iso_;
    Labels env_;
};

enum class InstrumentClass { RO, QC, CP };

struct InstrumentBranch {
    double weight = 1.0;
    std::vector<Mat> kraus;
};

/// Finite family {p_k, E_k}; E_k given by Kraus operators A -> a.
struct Instrument {
    std::vector<InstrumentBranch> branches;
    InstrumentClass class_tag = InstrumentClass::CP;

    std::size_t input_dim() const;
    std::size_t output_dim() const;
};

/// Throws ValidationError when completeness or the class shape is violated.
void validate_instrument(const Instrument& inst, double tol = kInstrumentTol);
std::string to_string(InstrumentClass c);
InstrumentClass instrument_class_from_string(const std::string& s);

// ---- operations ----------------------------------------------------------

LabeledState tensor(const LabeledState& s1, const LabeledState& s2);

/// Same state with subsystems permuted into `order` (must be a permutation of the labels).
LabeledState reorder(const LabeledState& s, const Labels& order);

LabeledState partial_trace(const LabeledState& s, const Labels& discard);
/// Reduced state on `keep` (in the state's own order). Empty `keep` is rejected.
LabeledState reduce_to(const LabeledState& s, const Labels& keep);

/// Canonical purification: eigenvalues descending, each eigenvector's first
/// nonzero component real positive. env is appended as the last subsystem.
LabeledState purify(const LabeledState& rho, const Subsystem& env);

/// Applies the isometry on the labels `on`; outputs replace the `on` block at
/// the position of its first label. Purity is preserved.
LabeledState apply_isometry(const IsometryMap& iso, const LabeledState& s, const Labels& on);

/// Applies the channel on `on` (Kraus route); env outputs are discarded.
LabeledState apply_channel(const QuantumChannel& ch, const LabeledState& s, const Labels& on);

QuantumChannel complementary_channel(const QuantumChannel& ch);

/// outer o inner. outer's inputs must match inner's non-env outputs by dimension.
/// Environment labels that collide are suffixed.
QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner);

QuantumChannel identity_channel(std::size_t d, const std::string& in = "A", const std::string& out = "B");
QuantumChannel isometry_channel(const IsometryMap& iso);

LabeledState choi(const QuantumChannel& ch);
/// Trace distance between Choi states; only total input/output dimensions must agree.
double choi_distance(const QuantumChannel& a, const QuantumChannel& b);

double trace_distance(const LabeledState& s1, const LabeledState& s2);
/// Halved trace norm of a Hermitian difference.
double trace_distance(const Mat& rho1, const Mat& rho2);

IsometryMap random_isometry(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed);
Mat random_isometry_matrix(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed);
/// Haar-random pure state.
LabeledState random_pure_state(const std::vector<Subsystem>& subsystems, std::uint64_t seed);

// ---- small constructors used across modules --------------------------------

LabeledState basis_state(const std::vector<Subsystem>& subsystems, std::size_t index);
LabeledState maximally_entangled(std::size_t d, const std::string& a = "A", const std::string& b = "B");
LabeledState maximally_mixed(const std::vector<Subsystem>& subsystems);

// ---- index helpers ---------------------------------------------------------

std::vector<std::size_t> dims_of(std::span<const Subsystem> subsystems);
/// src[i] is the old flat index of new flat index i when subsystem j of the new
/// order is subsystem perm[j] of the old order.
std::vector<std::size_t> permutation_map(std::span<const std::size_t> old_dims,
                                         std::span<const std::size_t> perm);

/// (M (x) I_rest) x for x laid out as [leading, rest] row-major.
Vec apply_leading(const Mat& m, const Vec& x, std::size_t rest);
/// Column-wise (M (x) I_rest) X.
Mat apply_leading(const Mat& m, const Mat& x, std::size_t rest);

/// Hermitian spectrum, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Mat& h);

}  // namespace ssclab
