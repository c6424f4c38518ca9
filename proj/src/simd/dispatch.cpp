#include <atomic>

#include "tof/simd/kernels.hpp"

namespace tof::simd {

#ifdef TOF_HAVE_AVX2_TU
namespace avx2 {
extern const KernelTable table;
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(TOF_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* detect() {
    const KernelTable* t = avx2_kernels();
    return t ? t : &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
    static std::atomic<const KernelTable*> a{detect()};
    return a;
}

}  // namespace

const KernelTable* avx2_kernels() {
#ifdef TOF_HAVE_AVX2_TU
    static const bool ok = cpu_has_avx2();
    return ok ? &avx2::table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

Backend active_backend() { return &kernels() == &scalar_kernels() ? Backend::scalar : Backend::avx2; }

bool backend_available(Backend b) { return b == Backend::scalar || avx2_kernels() != nullptr; }

bool set_backend(Backend b) {
    if (!backend_available(b)) return false;
    active().store(b == Backend::scalar ? &scalar_kernels() : avx2_kernels());
    return true;
}

}  // namespace tof::simd
