#include "tof/dyadic.hpp"

#include <stdexcept>

namespace tof {

void Dyadic::normalize() {
    if (a_.is_zero()) {
        k_ = 0;
        return;
    }
    unsigned tz = static_cast<unsigned>(boost::multiprecision::lsb(boost::multiprecision::abs(a_)));
    unsigned s = tz < k_ ? tz : k_;
    if (s) {
        a_ >>= s;
        k_ -= s;
    }
}

BigInt Dyadic::scaled_numerator(unsigned k) const {
    if (k < k_) throw std::invalid_argument("cannot rescale to a smaller exponent");
    return a_ << (k - k_);
}

Dyadic Dyadic::operator-() const {
    Dyadic r = *this;
    r.a_ = -r.a_;
    return r;
}

Dyadic operator+(const Dyadic& x, const Dyadic& y) {
    unsigned k = x.k_ > y.k_ ? x.k_ : y.k_;
    return Dyadic(x.scaled_numerator(k) + y.scaled_numerator(k), k);
}

Dyadic operator*(const Dyadic& x, const Dyadic& y) { return Dyadic(x.a_ * y.a_, x.k_ + y.k_); }

Dyadic Dyadic::half() const { return Dyadic(a_, k_ + 1); }

std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y) {
    unsigned k = x.k_ > y.k_ ? x.k_ : y.k_;
    BigInt a = x.scaled_numerator(k), b = y.scaled_numerator(k);
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Dyadic::str() const {
    if (k_ == 0) return a_.str();
    return a_.str() + "/2^" + std::to_string(k_);
}

Dyadic sde2_reduce(const BigInt& a, long long k) {
    if (k < 0) throw std::invalid_argument("negative denominator exponent");
    return Dyadic(a, static_cast<unsigned>(k));
}

Dyadic dyadic_add(const Dyadic& x, const Dyadic& y) { return x + y; }

Dyadic dyadic_half_sum4(const std::array<Dyadic, 4>& v, const std::array<int, 4>& signs) {
    Dyadic s;
    for (int i = 0; i < 4; ++i) s += signs[i] < 0 ? -v[i] : v[i];
    return s.half();
}

}  // namespace tof
