#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace tof {

using BigInt = boost::multiprecision::cpp_int;

// Exact element a / 2^k of Z[1/2], always normalised: a odd, or a = 0 and k = 0.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long long a) : a_(a) { normalize(); }  // NOLINT(implicit)
    Dyadic(BigInt a, unsigned k) : a_(std::move(a)), k_(k) { normalize(); }

    const BigInt& numerator() const { return a_; }
    unsigned exponent() const { return k_; }
    unsigned sde() const { return k_; }
    bool is_zero() const { return a_.is_zero(); }
    int sign() const { return a_.sign(); }

    // Numerator when rescaled to denominator 2^k, k >= exponent().
    BigInt scaled_numerator(unsigned k) const;

    Dyadic operator-() const;
    friend Dyadic operator+(const Dyadic& x, const Dyadic& y);
    friend Dyadic operator-(const Dyadic& x, const Dyadic& y) { return x + (-y); }
    friend Dyadic operator*(const Dyadic& x, const Dyadic& y);
    Dyadic& operator+=(const Dyadic& y) { return *this = *this + y; }
    Dyadic half() const;

    friend bool operator==(const Dyadic& x, const Dyadic& y) { return x.k_ == y.k_ && x.a_ == y.a_; }
    friend std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y);

    std::string str() const;

private:
    void normalize();

    BigInt a_ = 0;
    unsigned k_ = 0;
};

// Throws std::invalid_argument for k < 0.
Dyadic sde2_reduce(const BigInt& a, long long k);
Dyadic dyadic_add(const Dyadic& x, const Dyadic& y);
// (s1 v1 + s2 v2 + s3 v3 + s4 v4) / 2 with every s in {+1, -1}.
Dyadic dyadic_half_sum4(const std::array<Dyadic, 4>& v, const std::array<int, 4>& signs);

}  // namespace tof
