// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "ssclab/simd.hpp"

namespace ssclab::simd {
namespace {

// One __m256d holds two interleaved complex doubles: [r0 i0 r1 i1].

inline cplx hsum(__m256d re_parts, __m256d im_parts) {
    alignas(32) double r[4], i[4];
    _mm256_store_pd(r, re_parts);
    _mm256_store_pd(i, im_parts);
    return {(r[0] + r[1]) + (r[2] + r[3]), (i[0] + i[1]) + (i[2] + i[3])};
}

cplx dotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const auto* pa = reinterpret_cast<const double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    // acc_rr collects ar*br, ai*bi lanes; acc_x collects ar*bi, ai*br lanes.
    __m256d acc_rr = _mm256_setzero_pd();
    __m256d acc_x = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * k);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * k);
        acc_rr = _mm256_fmadd_pd(va, vb, acc_rr);
        const __m256d vb_sw = _mm256_permute_pd(vb, 0b0101);
        acc_x = _mm256_fmadd_pd(va, vb_sw, acc_x);
    }
    alignas(32) double rr[4], xx[4];
    _mm256_store_pd(rr, acc_rr);
    _mm256_store_pd(xx, acc_x);
    // re = sum(ar*br + ai*bi); im = sum(ai*br - ar*bi)
    double re = (rr[0] + rr[1]) + (rr[2] + rr[3]);
    double im = (xx[1] - xx[0]) + (xx[3] - xx[2]);
    for (; k < n; ++k) {
        re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
        im += a[k].imag() * b[k].real() - a[k].real() * b[k].imag();
    }
    return {re, im};
}

cplx dotu_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const auto* pa = reinterpret_cast<const double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    __m256d acc_rr = _mm256_setzero_pd();
    __m256d acc_x = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * k);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * k);
        acc_rr = _mm256_fmadd_pd(va, vb, acc_rr);
        acc_x = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), acc_x);
    }
    alignas(32) double rr[4], xx[4];
    _mm256_store_pd(rr, acc_rr);
    _mm256_store_pd(xx, acc_x);
    // re = sum(ar*br - ai*bi); im = sum(ar*bi + ai*br)
    double re = (rr[0] - rr[1]) + (rr[2] - rr[3]);
    double im = (xx[0] + xx[1]) + (xx[2] + xx[3]);
    for (; k < n; ++k) {
        re += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
        im += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
    }
    return {re, im};
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const auto* px = reinterpret_cast<const double*>(x);
    auto* py = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d vx = _mm256_loadu_pd(px + 2 * k);
        const __m256d vy = _mm256_loadu_pd(py + 2 * k);
        const __m256d vx_sw = _mm256_permute_pd(vx, 0b0101);
        // [ar*xr - ai*xi, ar*xi + ai*xr]
        const __m256d prod = _mm256_fmaddsub_pd(ar, vx, _mm256_mul_pd(ai, vx_sw));
        _mm256_storeu_pd(py + 2 * k, _mm256_add_pd(vy, prod));
    }
    for (; k < n; ++k) {
        const double xr = x[k].real(), xi = x[k].imag();
        y[k] = {y[k].real() + alpha.real() * xr - alpha.imag() * xi,
                y[k].imag() + alpha.real() * xi + alpha.imag() * xr};
    }
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{dotc_avx2, dotu_avx2, axpy_avx2};
    return &table;
}

}  // namespace ssclab::simd
