#pragma once

#include <vector>

#include "ssclab/qcore.hpp"

namespace ssclab {

/// Von Neumann entropy of a reduced state, in bits.
struct EntropyReport {
    double value = 0.0;
    std::vector<double> spectrum;  // ascending, after clipping
    double clipped_mass = 0.0;     // magnitude of negative eigenvalues set to zero
};

inline constexpr double kClipFloor = 1e-10;
inline constexpr double kSpectrumFloor = 1e-14;

/// Entropy from a Hermitian spectrum; throws when an eigenvalue is below -kClipFloor.
EntropyReport entropy_of_spectrum(const Eigen::VectorXd& eigenvalues);

EntropyReport entropy_report(const LabeledState& s, const Labels& part);
double entropy(const LabeledState& s, const Labels& part);
double mutual_information(const LabeledState& s, const Labels& a, const Labels& b);
double conditional_mutual_information(const LabeledState& s, const Labels& a, const Labels& b, const Labels& c);
/// I(a>b) = S(b) - S(ab).
double coherent_information(const LabeledState& s, const Labels& a, const Labels& b);

/// Shannon entropy of a probability vector, bits.
double shannon_entropy(const std::vector<double>& p);

}  // namespace ssclab
