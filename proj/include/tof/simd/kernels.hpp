#pragma once

#include <cstddef>
#include <cstdint>

namespace tof::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
    const char* name;
    // dst[i] = a[i] + sb*b[i] + sc*c[i] + sd*d[i] with signs in {+1,-1}.
    // Returns the bitwise OR of all dst values.
    std::uint64_t (*signed_sum4)(std::int64_t* dst, const std::int64_t* a, const std::int64_t* b,
                                 const std::int64_t* c, const std::int64_t* d, int sb, int sc, int sd,
                                 std::size_t len);
    // Exact arithmetic shifts. Right shifts assume the low bits are zero.
    void (*shift_right)(std::int64_t* data, std::size_t len, unsigned s);
    void (*shift_left)(std::int64_t* data, std::size_t len, unsigned s);
    std::uint64_t (*or_reduce)(const std::int64_t* data, std::size_t len);
    // OR of |data[i]|, used for overflow bounds.
    std::uint64_t (*magnitude_or)(const std::int64_t* data, std::size_t len);
    std::size_t (*count_nonzero)(const std::int64_t* data, std::size_t len);
    // In-place unnormalised Walsh-Hadamard transform of len complex values
    // stored as interleaved (re, im) doubles. len must be a power of two.
    void (*fwht_complex)(double* data, std::size_t len);
};

const KernelTable& scalar_kernels();
// nullptr when the CPU or the build lacks AVX2.
const KernelTable* avx2_kernels();

const KernelTable& kernels();
Backend active_backend();
// Returns false if the backend is unavailable; the active table is unchanged then.
bool set_backend(Backend b);
bool backend_available(Backend b);

}  // namespace tof::simd
