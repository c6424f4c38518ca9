// Compiled with -mavx2. Keep this file free of std templates so no AVX2
// instantiations leak into the rest of the library.
#include <immintrin.h>

#include "tof/simd/kernels.hpp"

namespace tof::simd::avx2 {
namespace {

inline __m256i negate_if(__m256i v, __m256i mask) {
    // mask is all ones or zero; (v ^ m) - m negates when m = -1.
    return _mm256_sub_epi64(_mm256_xor_si256(v, mask), mask);
}

std::uint64_t signed_sum4(std::int64_t* dst, const std::int64_t* a, const std::int64_t* b, const std::int64_t* c,
                          const std::int64_t* d, int sb, int sc, int sd, std::size_t len) {
    const __m256i mb = _mm256_set1_epi64x(sb < 0 ? -1 : 0);
    const __m256i mc = _mm256_set1_epi64x(sc < 0 ? -1 : 0);
    const __m256i md = _mm256_set1_epi64x(sd < 0 ? -1 : 0);
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = negate_if(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)), mb);
        __m256i vc = negate_if(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + i)), mc);
        __m256i vd = negate_if(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(d + i)), md);
        __m256i s = _mm256_add_epi64(_mm256_add_epi64(va, vb), _mm256_add_epi64(vc, vd));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), s);
        acc = _mm256_or_si256(acc, s);
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t out = lanes[0] | lanes[1] | lanes[2] | lanes[3];
    for (; i < len; ++i) {
        std::int64_t v = a[i] + sb * b[i] + sc * c[i] + sd * d[i];
        dst[i] = v;
        out |= static_cast<std::uint64_t>(v);
    }
    return out;
}

void shift_right(std::int64_t* data, std::size_t len, unsigned s) {
    // No 64-bit arithmetic shift in AVX2: logical shift, then refill the sign bits.
    const __m128i cnt = _mm_cvtsi32_si128(static_cast<int>(s));
    const __m256i zero = _mm256_setzero_si256();
    const __m128i fill = _mm_cvtsi32_si128(static_cast<int>(64 - s));
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
        __m256i neg = _mm256_cmpgt_epi64(zero, v);
        __m256i r = _mm256_or_si256(_mm256_srl_epi64(v, cnt), s == 0 ? zero : _mm256_sll_epi64(neg, fill));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(data + i), r);
    }
    for (; i < len; ++i) data[i] >>= s;
}

void shift_left(std::int64_t* data, std::size_t len, unsigned s) {
    const __m128i cnt = _mm_cvtsi32_si128(static_cast<int>(s));
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(data + i), _mm256_sll_epi64(v, cnt));
    }
    for (; i < len; ++i) data[i] = static_cast<std::int64_t>(static_cast<std::uint64_t>(data[i]) << s);
}

std::uint64_t or_reduce(const std::int64_t* data, std::size_t len) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        acc = _mm256_or_si256(acc, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i)));
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t out = lanes[0] | lanes[1] | lanes[2] | lanes[3];
    for (; i < len; ++i) out |= static_cast<std::uint64_t>(data[i]);
    return out;
}

std::uint64_t magnitude_or(const std::int64_t* data, std::size_t len) {
    const __m256i zero = _mm256_setzero_si256();
    __m256i acc = zero;
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
        acc = _mm256_or_si256(acc, negate_if(v, _mm256_cmpgt_epi64(zero, v)));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t out = lanes[0] | lanes[1] | lanes[2] | lanes[3];
    for (; i < len; ++i) {
        std::uint64_t v = static_cast<std::uint64_t>(data[i]);
        out |= data[i] < 0 ? ~v + 1 : v;
    }
    return out;
}

std::size_t count_nonzero(const std::int64_t* data, std::size_t len) {
    const __m256i zero = _mm256_setzero_si256();
    std::size_t zeros = 0;
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256i eq = _mm256_cmpeq_epi64(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i)), zero);
        zeros += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(_mm256_castsi256_pd(eq))));
    }
    std::size_t nz = i - zeros;
    for (; i < len; ++i) nz += data[i] != 0;
    return nz;
}

void fwht_complex(double* data, std::size_t len) {
    if (len < 2) return;
    // h = 1: butterfly between neighbouring complex numbers, one pair per register.
    for (std::size_t j = 0; j < len; j += 2) {
        __m128d u = _mm_loadu_pd(data + 2 * j);
        __m128d v = _mm_loadu_pd(data + 2 * j + 2);
        _mm_storeu_pd(data + 2 * j, _mm_add_pd(u, v));
        _mm_storeu_pd(data + 2 * j + 2, _mm_sub_pd(u, v));
    }
    for (std::size_t h = 2; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += 2 * h) {
            for (std::size_t j = i; j < i + h; j += 2) {
                double* pu = data + 2 * j;
                double* pv = data + 2 * (j + h);
                __m256d u = _mm256_loadu_pd(pu);
                __m256d v = _mm256_loadu_pd(pv);
                _mm256_storeu_pd(pu, _mm256_add_pd(u, v));
                _mm256_storeu_pd(pv, _mm256_sub_pd(u, v));
            }
        }
    }
}

}  // namespace

extern const KernelTable table;
const KernelTable table{"avx2", signed_sum4, shift_right, shift_left, or_reduce,
                        magnitude_or, count_nonzero, fwht_complex};

}  // namespace tof::simd::avx2
