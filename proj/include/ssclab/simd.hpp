#pragma once

// Complex double inner loops used by partial traces and isometry application.
// Every kernel has a scalar reference version; vectorized versions are picked
// once at startup from what the CPU reports and must agree with the reference.

#include <complex>
#include <cstddef>
#include <string_view>

namespace ssclab::simd {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
    // sum_k a[k] * conj(b[k])
    cplx (*dotc)(const cplx* a, const cplx* b, std::size_t n);
    // sum_k a[k] * b[k]
    cplx (*dotu)(const cplx* a, const cplx* b, std::size_t n);
    // y[k] += alpha * x[k]
    void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
};

const KernelTable& scalar_kernels();
// Null when the backend was not compiled in.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

bool backend_supported(Backend b);
Backend active_backend();
// Throws std::invalid_argument when the CPU or build lacks the backend.
void set_backend(Backend b);
std::string_view backend_name(Backend b);

const KernelTable& kernels();

inline cplx dotc(const cplx* a, const cplx* b, std::size_t n) { return kernels().dotc(a, b, n); }
inline cplx dotu(const cplx* a, const cplx* b, std::size_t n) { return kernels().dotu(a, b, n); }
inline void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) { kernels().axpy(alpha, x, y, n); }

}  // namespace ssclab::simd
