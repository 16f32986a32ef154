#include <cmath>

#include "ssclab/capacities.hpp"

namespace ssclab {

std::size_t InstrumentShape::param_dim() const {
    switch (cls) {
        case InstrumentClass::RO: return a_dim * branches;
        case InstrumentClass::QC:
        case InstrumentClass::CP: return a_dim * branches * kraus;
    }
    return 0;
}

Instrument instrument_from_isometry(const Mat& w, const InstrumentShape& shape) {
    if (static_cast<std::size_t>(w.rows()) != shape.param_dim()) {
        throw ValidationError("instrument parameter has " + std::to_string(w.rows()) + " rows, expected " +
                              std::to_string(shape.param_dim()));
    }
    const auto a = static_cast<Eigen::Index>(shape.a_dim);
    const auto K = static_cast<Eigen::Index>(shape.branches);
    const auto M = static_cast<Eigen::Index>(shape.kraus);
    const Eigen::Index dA = w.cols();
    Instrument inst;
    inst.class_tag = shape.cls;
    for (Eigen::Index k = 0; k < K; ++k) {
        InstrumentBranch br;
        switch (shape.cls) {
            case InstrumentClass::RO: {
                Mat op(a, dA);
                for (Eigen::Index x = 0; x < a; ++x) op.row(x) = w.row(x * K + k);
                br.kraus.push_back(std::move(op));
                break;
            }
            case InstrumentClass::CP:
                for (Eigen::Index j = 0; j < M; ++j) {
                    Mat op(a, dA);
                    for (Eigen::Index x = 0; x < a; ++x) op.row(x) = w.row((x * K + k) * M + j);
                    br.kraus.push_back(std::move(op));
                }
                break;
            case InstrumentClass::QC:
                for (Eigen::Index x = 0; x < a; ++x) {
                    for (Eigen::Index l = 0; l < M; ++l) {
                        Mat op = Mat::Zero(a, dA);
                        op.row(x) = w.row((k * a + x) * M + l);
                        br.kraus.push_back(std::move(op));
                    }
                }
                break;
        }
        inst.branches.push_back(std::move(br));
    }
    return inst;
}

Mat cp_isometry_from_instrument(const Instrument& inst, const InstrumentShape& shape) {
    if (shape.cls != InstrumentClass::CP) throw ValidationError("seeding target must be the CP class");
    if (inst.output_dim() != shape.a_dim) throw ValidationError("seed instrument output dimension does not match |a|");
    if (inst.branches.size() > shape.branches) throw ValidationError("seed instrument has more branches than the shape");
    const auto a = static_cast<Eigen::Index>(shape.a_dim);
    const auto K = static_cast<Eigen::Index>(shape.branches);
    const auto M = static_cast<Eigen::Index>(shape.kraus);
    Mat w = Mat::Zero(static_cast<Eigen::Index>(shape.param_dim()), static_cast<Eigen::Index>(inst.input_dim()));
    for (std::size_t k = 0; k < inst.branches.size(); ++k) {
        const auto& br = inst.branches[k];
        if (br.kraus.size() > shape.kraus) throw ValidationError("seed instrument has more Kraus operators than the shape");
        const double s = std::sqrt(br.weight);
        for (std::size_t j = 0; j < br.kraus.size(); ++j) {
            for (Eigen::Index x = 0; x < a; ++x) {
                w.row((x * K + static_cast<Eigen::Index>(k)) * M + static_cast<Eigen::Index>(j)) = s * br.kraus[j].row(x);
            }
        }
    }
    return w;
}

}  // namespace ssclab
