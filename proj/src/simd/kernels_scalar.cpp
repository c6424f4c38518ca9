#include "tof/simd/kernels.hpp"

namespace tof::simd {
namespace {

std::uint64_t signed_sum4(std::int64_t* dst, const std::int64_t* a, const std::int64_t* b, const std::int64_t* c,
                          const std::int64_t* d, int sb, int sc, int sd, std::size_t len) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < len; ++i) {
        std::int64_t v = a[i] + sb * b[i] + sc * c[i] + sd * d[i];
        dst[i] = v;
        acc |= static_cast<std::uint64_t>(v);
    }
    return acc;
}

void shift_right(std::int64_t* data, std::size_t len, unsigned s) {
    for (std::size_t i = 0; i < len; ++i) data[i] >>= s;
}

void shift_left(std::int64_t* data, std::size_t len, unsigned s) {
    for (std::size_t i = 0; i < len; ++i) data[i] = static_cast<std::int64_t>(static_cast<std::uint64_t>(data[i]) << s);
}

std::uint64_t or_reduce(const std::int64_t* data, std::size_t len) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < len; ++i) acc |= static_cast<std::uint64_t>(data[i]);
    return acc;
}

std::uint64_t magnitude_or(const std::int64_t* data, std::size_t len) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < len; ++i) {
        std::uint64_t v = static_cast<std::uint64_t>(data[i]);
        acc |= data[i] < 0 ? ~v + 1 : v;
    }
    return acc;
}

std::size_t count_nonzero(const std::int64_t* data, std::size_t len) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < len; ++i) n += data[i] != 0;
    return n;
}

void fwht_complex(double* data, std::size_t len) {
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                double* u = data + 2 * j;
                double* v = data + 2 * (j + h);
                double ur = u[0], ui = u[1];
                u[0] = ur + v[0];
                u[1] = ui + v[1];
                v[0] = ur - v[0];
                v[1] = ui - v[1];
            }
        }
    }
}

const KernelTable table{"scalar", signed_sum4, shift_right, shift_left, or_reduce,
                        magnitude_or, count_nonzero, fwht_complex};

}  // namespace

const KernelTable& scalar_kernels() { return table; }

}  // namespace tof::simd
