#include <cmath>

#include "ssclab/qcore.hpp"

namespace ssclab {

std::size_t Instrument::input_dim() const {
    if (branches.empty() || branches.front().kraus.empty()) return 0;
    return static_cast<std::size_t>(branches.front().kraus.front().cols());
}

std::size_t Instrument::output_dim() const {
    if (branches.empty() || branches.front().kraus.empty()) return 0;
    return static_cast<std::size_t>(branches.front().kraus.front().rows());
}

void validate_instrument(const Instrument& inst, double tol) {
    if (inst.branches.empty()) throw ValidationError("instrument: no branches");
    const auto din = static_cast<Eigen::Index>(inst.input_dim());
    const auto dout = static_cast<Eigen::Index>(inst.output_dim());
    if (din == 0 || dout == 0) throw ValidationError("instrument: empty Kraus list");
    Mat completeness = Mat::Zero(din, din);
    for (std::size_t k = 0; k < inst.branches.size(); ++k) {
        const auto& br = inst.branches[k];
        const std::string where = "instrument branch " + std::to_string(k);
        if (!(br.weight >= 0.0) || !std::isfinite(br.weight)) throw ValidationError(where + ": negative weight");
        if (br.kraus.empty()) throw ValidationError(where + ": no Kraus operators");
        if (inst.class_tag == InstrumentClass::RO && br.kraus.size() != 1) {
            throw ValidationError(where + ": rank-one class requires exactly one Kraus operator");
        }
        for (const auto& kop : br.kraus) {
            if (kop.rows() != dout || kop.cols() != din) throw ValidationError(where + ": Kraus shape mismatch");
            if (inst.class_tag == InstrumentClass::QC) {
                // |j><w| form: at most one nonzero output row.
                int nonzero_rows = 0;
                for (Eigen::Index r = 0; r < kop.rows(); ++r) {
                    if (kop.row(r).norm() > tol) ++nonzero_rows;
                }
                if (nonzero_rows > 1) throw ValidationError(where + ": quantum-to-classical Kraus operator is not |j><w|");
            }
            completeness += br.weight * kop.adjoint() * kop;
        }
    }
    const double dev = (completeness - Mat::Identity(din, din)).cwiseAbs().maxCoeff();
    if (dev > tol) {
        throw ValidationError("instrument: weighted Kraus sum deviates from identity by " + std::to_string(dev));
    }
}

std::string to_string(InstrumentClass c) {
    switch (c) {
        case InstrumentClass::RO: return "ro";
        case InstrumentClass::QC: return "qc";
        case InstrumentClass::CP: return "cp";
    }
    return "cp";
}

InstrumentClass instrument_class_from_string(const std::string& s) {
    if (s == "ro" || s == "RO") return InstrumentClass::RO;
    if (s == "qc" || s == "QC") return InstrumentClass::QC;
    if (s == "cp" || s == "CP") return InstrumentClass::CP;
    throw ValidationError("unknown instrument class '" + s + "'", "class");
}

}  // namespace ssclab
