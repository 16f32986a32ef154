#include "ssclab/simd.hpp"

namespace ssclab::simd {
namespace {

cplx dotc_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double ar = a[k].real(), ai = a[k].imag();
        const double br = b[k].real(), bi = b[k].imag();
        re += ar * br + ai * bi;
        im += ai * br - ar * bi;
    }
    return {re, im};
}

cplx dotu_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double ar = a[k].real(), ai = a[k].imag();
        const double br = b[k].real(), bi = b[k].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double alr = alpha.real(), ali = alpha.imag();
    for (std::size_t k = 0; k < n; ++k) {
        const double xr = x[k].real(), xi = x[k].imag();
        y[k] = {y[k].real() + alr * xr - ali * xi, y[k].imag() + alr * xi + ali * xr};
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{dotc_scalar, dotu_scalar, axpy_scalar};
    return table;
}

}  // namespace ssclab::simd
