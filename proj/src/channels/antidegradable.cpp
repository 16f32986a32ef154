#include <cmath>

#include <Eigen/SVD>

#include "ssclab/channels.hpp"

namespace ssclab {

Mat relate_purifications(const Vec& psi, std::size_t dA, const Vec& phi, std::size_t dS, std::size_t dR) {
    if (static_cast<std::size_t>(psi.size()) != dR * dA || static_cast<std::size_t>(phi.size()) != dR * dS) {
        throw ValidationError("relate_purifications: vector lengths do not match the declared dimensions");
    }
    if (dS < dA) throw ValidationError("relate_purifications: target smaller than source");
    const auto r = static_cast<Eigen::Index>(dR);
    const auto a = static_cast<Eigen::Index>(dA);
    const auto s = static_cast<Eigen::Index>(dS);
    Mat P(r, a), Q(r, s);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < a; ++j) P(i, j) = psi(i * a + j);
        for (Eigen::Index j = 0; j < s; ++j) Q(i, j) = phi(i * s + j);
    }
    // P^+ with singular values below 1e-10 * max dropped
    Eigen::JacobiSVD<Mat> svd(P, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) inv(i) = 1.0 / sv(i);
    }
    const Mat pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    const Mat w0 = (pinv * Q).transpose();  // dS x dA

    // Isometric completion: keep the singular vectors, set every singular value to one.
    Eigen::JacobiSVD<Mat> pol(w0, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return pol.matrixU().leftCols(a) * pol.matrixV().adjoint();
}

IsometryMap self_complementary_antidegrader(const QuantumChannel& ch) {
    const std::size_t de = total_dim(ch.env_subsystems());
    if (de != ch.output_dim()) {
        throw ValidationError("self_complementary_antidegrader: environment and output dimensions differ");
    }
    const auto n = static_cast<Eigen::Index>(de);
    return IsometryMap({{"E", de}}, {{"F", de}, {"G", 1}}, Mat::Identity(n, n));
}

AntidegradableSimulation simulate_antidegradable_via_ss(const QuantumChannel& ch, const IsometryMap& anti_iso) {
    const std::size_t dA = ch.input_dim();
    const std::size_t dB = ch.output_dim();
    const std::size_t dE = total_dim(ch.env_subsystems());
    if (ch.env_labels().empty()) throw ValidationError("simulate_antidegradable_via_ss: channel has no environment");
    if (anti_iso.input_dim() != dE) {
        throw ValidationError("simulate_antidegradable_via_ss: anti-degrading isometry input dimension " +
                              std::to_string(anti_iso.input_dim()) + " does not match environment dimension " +
                              std::to_string(dE));
    }
    const std::size_t dF = anti_iso.outputs().front().dim;
    if (dF != dB) {
        throw ValidationError("simulate_antidegradable_via_ss: first anti-degrader output must match the channel output dimension");
    }
    const std::size_t dG = anti_iso.output_dim() / dF;

    Labels order;
    for (const auto& o : ch.output_subsystems()) order.push_back(o.name);
    for (const auto& e : ch.env_labels()) order.push_back(e);
    const Mat U = ch.stinespring().with_output_order(order).matrix();  // (dB*dE) x dA
    const Mat& V = anti_iso.matrix();                                     // (dF*dG) x dE

    // phi_{R B F G} = (V o U)|Phi_RA>, reference maximally entangled with A.
    const auto iA = static_cast<Eigen::Index>(dA), iB = static_cast<Eigen::Index>(dB), iE = static_cast<Eigen::Index>(dE);
    const Eigen::Index iFG = static_cast<Eigen::Index>(dF * dG);
    Vec phi(iA * iB * iFG);
    const double amp = 1.0 / std::sqrt(static_cast<double>(dA));
    for (Eigen::Index r = 0; r < iA; ++r) {
        Mat mr(iB, iE);
        for (Eigen::Index b = 0; b < iB; ++b) {
            for (Eigen::Index e = 0; e < iE; ++e) mr(b, e) = U(b * iE + e, r);
        }
        const Mat out = mr * V.transpose();  // dB x (dF dG)
        for (Eigen::Index b = 0; b < iB; ++b) {
            for (Eigen::Index x = 0; x < iFG; ++x) phi((r * iB + b) * iFG + x) = amp * out(b, x);
        }
    }
    const LabeledState phi_s = LabeledState::pure_unchecked({{"R", dA}, {"B", dB}, {"F", dF}, {"G", dG}}, phi);
    const double rf_dev = trace_distance(reduce_to(phi_s, {"R", "B"}).density_matrix(),
                                         reduce_to(phi_s, {"R", "F"}).density_matrix());
    if (rf_dev > 1e-8) {
        throw ValidationError("simulate_antidegradable_via_ss: phi_RB and phi_RF differ by " + std::to_string(rf_dev),
                              "anti_iso");
    }

    // G -> G1 G2 through the first |G| inputs of the symmetric-subspace isometry.
    const IsometryMap split_g({{"G", dG}}, {{"G1", dG}, {"G2", dG}}, ss_isometry_matrix(dG).leftCols(static_cast<Eigen::Index>(dG)));
    const LabeledState phi2 = apply_isometry(split_g, phi_s, {"G"});
    const LabeledState swapped =
        reorder(reorder(phi2, {"R", "F", "B", "G1", "G2"}).relabeled({{"F", "B"}, {"B", "F"}}), phi2.labels());

    const LabeledState h01 = basis_state({{"H1", 2}, {"H2", 2}}, 1);
    const LabeledState h10 = basis_state({{"H1", 2}, {"H2", 2}}, 2);
    const Vec psi_vec = (tensor(phi2, h01).amplitudes() + tensor(swapped, h10).amplitudes()) / std::sqrt(2.0);
    auto subs = tensor(phi2, h01).subsystems();
    const LabeledState Psi = reorder(LabeledState::pure_unchecked(subs, psi_vec), {"R", "B", "G1", "H1", "F", "G2", "H2"});

    AntidegradableSimulation out{0, ch, ch, ch, 0.0, 0.0, 0.0};
    const LabeledState exchanged =
        reorder(reorder(Psi, {"R", "F", "G2", "H2", "B", "G1", "H1"})
                    .relabeled({{"F", "B"}, {"G2", "G1"}, {"H2", "H1"}, {"B", "F"}, {"G1", "G2"}, {"H1", "H2"}}),
                Psi.labels());
    out.symmetry_defect = (exchanged.amplitudes() - Psi.amplitudes()).norm();
    out.rb_defect = trace_distance(reduce_to(Psi, {"R", "B"}).density_matrix(), reduce_to(phi_s, {"R", "B"}).density_matrix());

    const std::size_t d_alpha = dB * dG * 2;
    const std::size_t dS = d_alpha * (d_alpha + 1) / 2;
    const Mat Uss = ss_isometry_matrix(d_alpha);
    const auto iAl = static_cast<Eigen::Index>(d_alpha * d_alpha);
    Mat psi_mat(iA, iAl);
    for (Eigen::Index r = 0; r < iA; ++r) psi_mat.row(r) = Psi.amplitudes().segment(r * iAl, iAl).transpose();
    const Mat pre = psi_mat * Uss.conjugate();  // dA x dS
    const double lost = std::abs(1.0 - pre.squaredNorm());
    if (out.symmetry_defect > 1e-8 || lost > 1e-8) {
        throw ConsistencyError("simulate_antidegradable_via_ss: Psi is not in the symmetric subspace (defect " +
                               std::to_string(std::max(out.symmetry_defect, lost)) + ")");
    }
    Vec Phi(iA * static_cast<Eigen::Index>(dS));
    for (Eigen::Index r = 0; r < iA; ++r) Phi.segment(r * static_cast<Eigen::Index>(dS), static_cast<Eigen::Index>(dS)) = pre.row(r).transpose();

    Vec psi_ra = Vec::Zero(iA * iA);
    for (Eigen::Index i = 0; i < iA; ++i) psi_ra(i * iA + i) = amp;
    const Mat W = relate_purifications(psi_ra, dA, Phi, dS, dA);

    out.d = d_alpha;
    out.encoder = isometry_channel(IsometryMap({{"A", dA}}, {{"S", dS}}, W, 1e-8));
    const QuantumChannel ss(IsometryMap({{"S", dS}}, {{"alpha", d_alpha}, {"alpha_bar", d_alpha}}, Uss), {"alpha_bar"});
    const auto ia = static_cast<Eigen::Index>(d_alpha);
    out.decoder = QuantumChannel(IsometryMap({{"alpha", d_alpha}}, {{"B", dB}, {"G1", dG}, {"H1", 2}}, Mat::Identity(ia, ia)),
                                 {"G1", "H1"});
    out.composite = compose(out.decoder, compose(ss, out.encoder));
    out.residual = choi_distance(out.composite, ch);
    return out;
}

}  // namespace ssclab
