// AArch64 only. A float64x2_t holds exactly one complex double.
#include <arm_neon.h>

#include "ssclab/simd.hpp"

namespace ssclab::simd {
namespace {

cplx dotc_neon(const cplx* a, const cplx* b, std::size_t n) {
    const auto* pa = reinterpret_cast<const double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    float64x2_t acc_rr = vdupq_n_f64(0.0);  // [ar*br, ai*bi]
    float64x2_t acc_x = vdupq_n_f64(0.0);   // [ar*bi, ai*br]
    for (std::size_t k = 0; k < n; ++k) {
        const float64x2_t va = vld1q_f64(pa + 2 * k);
        const float64x2_t vb = vld1q_f64(pb + 2 * k);
        acc_rr = vfmaq_f64(acc_rr, va, vb);
        acc_x = vfmaq_f64(acc_x, va, vextq_f64(vb, vb, 1));
    }
    return {vgetq_lane_f64(acc_rr, 0) + vgetq_lane_f64(acc_rr, 1),
            vgetq_lane_f64(acc_x, 1) - vgetq_lane_f64(acc_x, 0)};
}

cplx dotu_neon(const cplx* a, const cplx* b, std::size_t n) {
    const auto* pa = reinterpret_cast<const double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    float64x2_t acc_rr = vdupq_n_f64(0.0);
    float64x2_t acc_x = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const float64x2_t va = vld1q_f64(pa + 2 * k);
        const float64x2_t vb = vld1q_f64(pb + 2 * k);
        acc_rr = vfmaq_f64(acc_rr, va, vb);
        acc_x = vfmaq_f64(acc_x, va, vextq_f64(vb, vb, 1));
    }
    return {vgetq_lane_f64(acc_rr, 0) - vgetq_lane_f64(acc_rr, 1),
            vgetq_lane_f64(acc_x, 0) + vgetq_lane_f64(acc_x, 1)};
}

void axpy_neon(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const auto* px = reinterpret_cast<const double*>(x);
    auto* py = reinterpret_cast<double*>(y);
    const float64x2_t ar = vdupq_n_f64(alpha.real());
    const double ai_lanes[2] = {-alpha.imag(), alpha.imag()};
    const float64x2_t ai = vld1q_f64(ai_lanes);
    for (std::size_t k = 0; k < n; ++k) {
        const float64x2_t vx = vld1q_f64(px + 2 * k);
        float64x2_t vy = vld1q_f64(py + 2 * k);
        vy = vfmaq_f64(vy, ar, vx);
        vy = vfmaq_f64(vy, ai, vextq_f64(vx, vx, 1));
        vst1q_f64(py + 2 * k, vy);
    }
}

}  // namespace

const KernelTable* neon_kernels() {
    static const KernelTable table{dotc_neon, dotu_neon, axpy_neon};
    return &table;
}

}  // namespace ssclab::simd
