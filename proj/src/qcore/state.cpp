#include <algorithm>
#include <cmath>
#include <set>

#include "ssclab/qcore.hpp"

namespace ssclab {

std::size_t total_dim(std::span<const Subsystem> subsystems) {
    std::size_t d = 1;
    for (const auto& s : subsystems) d *= s.dim;
    return d;
}

namespace {

void check_subsystems(const std::vector<Subsystem>& subsystems, const char* what) {
    std::set<std::string> seen;
    for (const auto& s : subsystems) {
        if (s.dim < 1) throw ValidationError(std::string(what) + ": subsystem '" + s.name + "' has dim 0");
        if (s.name.empty()) throw ValidationError(std::string(what) + ": empty subsystem name");
        if (!seen.insert(s.name).second) {
            throw ValidationError(std::string(what) + ": duplicate subsystem label '" + s.name + "'");
        }
    }
}

std::vector<Subsystem> rename(const std::vector<Subsystem>& subs, const std::map<std::string, std::string>& renames) {
    std::vector<Subsystem> out = subs;
    for (auto& s : out) {
        if (auto it = renames.find(s.name); it != renames.end()) s.name = it->second;
    }
    return out;
}

}  // namespace

LabeledState::LabeledState(Kind kind, std::vector<Subsystem> subsystems, Vec amps, Mat rho)
    : kind_(kind), subsystems_(std::move(subsystems)), dim_(total_dim(subsystems_)),
      amps_(std::move(amps)), rho_(std::move(rho)) {}

LabeledState LabeledState::pure(std::vector<Subsystem> subsystems, Vec amplitudes, double tol) {
    check_subsystems(subsystems, "pure state");
    const std::size_t d = total_dim(subsystems);
    if (static_cast<std::size_t>(amplitudes.size()) != d) {
        throw ValidationError("pure state: amplitude count " + std::to_string(amplitudes.size()) +
                              " does not match dimension " + std::to_string(d));
    }
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > tol) {
        throw ValidationError("pure state: norm " + std::to_string(norm) + " is not 1");
    }
    return LabeledState(Kind::Pure, std::move(subsystems), std::move(amplitudes), Mat());
}

LabeledState LabeledState::mixed(std::vector<Subsystem> subsystems, Mat density, double tol) {
    check_subsystems(subsystems, "mixed state");
    const std::size_t d = total_dim(subsystems);
    if (static_cast<std::size_t>(density.rows()) != d || static_cast<std::size_t>(density.cols()) != d) {
        throw ValidationError("mixed state: density matrix is not " + std::to_string(d) + "x" + std::to_string(d));
    }
    if ((density - density.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw ValidationError("mixed state: density matrix is not Hermitian");
    }
    const cplx tr = density.trace();
    if (std::abs(tr - 1.0) > tol) {
        throw ValidationError("mixed state: trace " + std::to_string(tr.real()) + " is not 1");
    }
    const Mat herm = 0.5 * (density + density.adjoint());
    if (hermitian_eigenvalues(herm).minCoeff() < -tol) {
        throw ValidationError("mixed state: density matrix has a negative eigenvalue");
    }
    return LabeledState(Kind::Mixed, std::move(subsystems), Vec(), herm);
}

LabeledState LabeledState::pure_unchecked(std::vector<Subsystem> subsystems, Vec amplitudes) {
    return LabeledState(Kind::Pure, std::move(subsystems), std::move(amplitudes), Mat());
}

LabeledState LabeledState::mixed_unchecked(std::vector<Subsystem> subsystems, Mat density) {
    return LabeledState(Kind::Mixed, std::move(subsystems), Vec(), std::move(density));
}

const Vec& LabeledState::amplitudes() const {
    if (kind_ != Kind::Pure) throw ValidationError("state is mixed; no amplitude vector");
    return amps_;
}

const Mat& LabeledState::density_matrix() const {
    if (kind_ != Kind::Mixed) throw ValidationError("state is pure; use density()");
    return rho_;
}

Mat LabeledState::density() const {
    if (kind_ == Kind::Mixed) return rho_;
    return amps_ * amps_.adjoint();
}

Labels LabeledState::labels() const {
    Labels out;
    out.reserve(subsystems_.size());
    for (const auto& s : subsystems_) out.push_back(s.name);
    return out;
}

bool LabeledState::has(const std::string& name) const {
    return std::any_of(subsystems_.begin(), subsystems_.end(), [&](const Subsystem& s) { return s.name == name; });
}

std::size_t LabeledState::position(const std::string& name) const {
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        if (subsystems_[i].name == name) return i;
    }
    throw ValidationError("unknown subsystem label '" + name + "'", name);
}

std::size_t LabeledState::dim_of(const std::string& name) const { return subsystems_[position(name)].dim; }

std::size_t LabeledState::dim_of(const Labels& names) const {
    std::size_t d = 1;
    for (const auto& n : names) d *= dim_of(n);
    return d;
}

LabeledState LabeledState::as_mixed() const {
    if (kind_ == Kind::Mixed) return *this;
    return mixed_unchecked(subsystems_, density());
}

LabeledState LabeledState::relabeled(const std::map<std::string, std::string>& renames) const {
    auto subs = rename(subsystems_, renames);
    check_subsystems(subs, "relabel");
    return LabeledState(kind_, std::move(subs), amps_, rho_);
}

// ---- IsometryMap -----------------------------------------------------------

IsometryMap::IsometryMap(std::vector<Subsystem> inputs, std::vector<Subsystem> outputs, Mat matrix, double tol)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), matrix_(std::move(matrix)) {
    check_subsystems(inputs_, "isometry inputs");
    check_subsystems(outputs_, "isometry outputs");
    const std::size_t din = total_dim(inputs_), dout = total_dim(outputs_);
    if (static_cast<std::size_t>(matrix_.cols()) != din || static_cast<std::size_t>(matrix_.rows()) != dout) {
        throw ValidationError("isometry: matrix is " + std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()) + ", expected " + std::to_string(dout) + "x" +
                              std::to_string(din));
    }
    if (dout < din) throw ValidationError("isometry: output dimension smaller than input dimension");
    const Mat gram = matrix_.adjoint() * matrix_;
    const double dev = (gram - Mat::Identity(din, din)).cwiseAbs().maxCoeff();
    if (dev > tol) throw ValidationError("isometry: M^dagger M deviates from identity by " + std::to_string(dev));
}

IsometryMap IsometryMap::relabeled(const std::map<std::string, std::string>& renames) const {
    return IsometryMap(rename(inputs_, renames), rename(outputs_, renames), matrix_, 1e-8);
}

IsometryMap IsometryMap::with_output_order(const Labels& order) const {
    if (order.size() != outputs_.size()) throw ValidationError("with_output_order: not a permutation of outputs");
    std::vector<std::size_t> perm;
    std::vector<Subsystem> new_outputs;
    for (const auto& name : order) {
        auto it = std::find_if(outputs_.begin(), outputs_.end(), [&](const Subsystem& s) { return s.name == name; });
        if (it == outputs_.end()) throw ValidationError("with_output_order: unknown output '" + name + "'");
        perm.push_back(static_cast<std::size_t>(it - outputs_.begin()));
        new_outputs.push_back(*it);
    }
    const auto dims = dims_of(outputs_);
    const auto src = permutation_map(dims, perm);
    Mat m(matrix_.rows(), matrix_.cols());
    for (std::size_t i = 0; i < src.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = matrix_.row(static_cast<Eigen::Index>(src[i]));
    return IsometryMap(inputs_, std::move(new_outputs), std::move(m), 1e-8);
}

// ---- QuantumChannel --------------------------------------------------------

QuantumChannel::QuantumChannel(IsometryMap stinespring, Labels env_labels)
    : iso_(std::move(stinespring)), env_(std::move(env_labels)) {
    std::set<std::string> seen;
    for (const auto& e : env_) {
        const auto& outs = iso_.outputs();
        if (std::none_of(outs.begin(), outs.end(), [&](const Subsystem& s) { return s.name == e; })) {
            throw ValidationError("channel: environment label '" + e + "' is not an isometry output");
        }
        if (!seen.insert(e).second) throw ValidationError("channel: duplicate environment label '" + e + "'");
    }
    if (env_.size() == iso_.outputs().size()) {
        throw ValidationError("channel: every output is environment; nothing reaches the receiver");
    }
}

bool QuantumChannel::is_env(const std::string& name) const {
    return std::find(env_.begin(), env_.end(), name) != env_.end();
}

std::vector<Subsystem> QuantumChannel::output_subsystems() const {
    std::vector<Subsystem> out;
    for (const auto& s : iso_.outputs()) {
        if (!is_env(s.name)) out.push_back(s);
    }
    return out;
}

std::vector<Subsystem> QuantumChannel::env_subsystems() const {
    std::vector<Subsystem> out;
    for (const auto& s : iso_.outputs()) {
        if (is_env(s.name)) out.push_back(s);
    }
    return out;
}

std::size_t QuantumChannel::output_dim() const { return total_dim(output_subsystems()); }

QuantumChannel QuantumChannel::relabeled(const std::map<std::string, std::string>& renames) const {
    Labels env = env_;
    for (auto& e : env) {
        if (auto it = renames.find(e); it != renames.end()) e = it->second;
    }
    return QuantumChannel(iso_.relabeled(renames), std::move(env));
}

}  // namespace ssclab
