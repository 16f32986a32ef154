#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ssclab/simd.hpp"

namespace ssclab::simd {

#ifndef SSCLAB_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#ifndef SSCLAB_HAVE_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2_fma() {
#if defined(SSCLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect() {
    // SSCLAB_SIMD=scalar forces the reference kernels.
    if (const char* env = std::getenv("SSCLAB_SIMD"); env && std::string(env) == "scalar") {
        return Backend::Scalar;
    }
    if (backend_supported(Backend::Avx2)) return Backend::Avx2;
    if (backend_supported(Backend::Neon)) return Backend::Neon;
    return Backend::Scalar;
}

const KernelTable* table_for(Backend b) {
    switch (b) {
        case Backend::Scalar: return &scalar_kernels();
        case Backend::Avx2: return avx2_kernels();
        case Backend::Neon: return neon_kernels();
    }
    return nullptr;
}

struct State {
    std::atomic<Backend> backend;
    std::atomic<const KernelTable*> table;
    State() : backend(detect()), table(table_for(backend.load())) {}
};

State& state() {
    static State s;
    return s;
}

}  // namespace

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2: return avx2_kernels() != nullptr && cpu_has_avx2_fma();
        case Backend::Neon: return neon_kernels() != nullptr;
    }
    return false;
}

Backend active_backend() { return state().backend.load(); }

void set_backend(Backend b) {
    if (!backend_supported(b)) {
        throw std::invalid_argument("SIMD backend not available: " + std::string(backend_name(b)));
    }
    state().table.store(table_for(b));
    state().backend.store(b);
}

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "unknown";
}

const KernelTable& kernels() { return *state().table.load(std::memory_order_relaxed); }

}  // namespace ssclab::simd
