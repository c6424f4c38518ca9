#include "tof/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace tof {
namespace {

BigInt ipow(long base, int n) {
    BigInt r = 1;
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}

Rational frac(const BigInt& num, long den) { return Rational(num) / Rational(den); }

double log4(double v) { return std::log(v) / std::log(4.0); }

void check_positive(double v, const char* what) {
    if (!(v > 0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

Rational gen_set_bound_tof(int n) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    Rational r = frac(ipow(64, n) - ipow(52, n) - 17 * (ipow(16, n) - ipow(4, n)), 384);
    r += frac(ipow(48, n) - 2 * ipow(24, n), 576);
    r -= frac(ipow(12, n) - 2 * ipow(6, n), 36);
    r += frac(ipow(13, n) - 1, 24);
    return r;
}

Rational gen_set_bound_cs(int n) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    return frac(ipow(16, n) - ipow(13, n) - ipow(4, n) + 1, 8) + frac(ipow(12, n) - 2 * ipow(6, n), 12);
}

std::string format_rational(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    BigInt d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) return num.str() + "/" + den.str();
    const int digits = std::max(twos, fives);
    BigInt scaled = num * ipow(10, digits) / den;
    const bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string s = scaled.str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, digits - s.size() + 1, '0');
    s.insert(s.size() - digits, ".");
    return (neg ? "-" : "") + s;
}

double lower_bound_approx(double alpha_max, double m, double epsilon, double c) {
    check_positive(alpha_max, "alpha");
    check_positive(m, "M");
    check_positive(epsilon, "epsilon");
    check_positive(c, "c");
    const double v = log4(1.0 / epsilon) - log4((epsilon / (2.0 * std::sqrt(m)) + std::sqrt(2.0 * m)) / (c * alpha_max));
    return std::max(0.0, v);
}

double lower_bound_exact(double alpha_max, double m, double c) {
    check_positive(alpha_max, "alpha");
    check_positive(m, "M");
    check_positive(c, "c");
    return std::max(0.0, log4(alpha_max * c * std::sqrt(m)));
}

const char* rotation_name(RotationKind k) {
    switch (k) {
        case RotationKind::Rz: return "Rz";
        case RotationKind::cRz: return "cRz";
        case RotationKind::cRn: return "cRn";
        case RotationKind::Givens: return "Givens";
        case RotationKind::ccRn: return "ccRn";
        case RotationKind::ccRz: return "ccRz";
    }
    return "?";
}

RotationKind parse_rotation(const std::string& s) {
    for (auto k : {RotationKind::Rz, RotationKind::cRz, RotationKind::cRn, RotationKind::Givens, RotationKind::ccRn,
                   RotationKind::ccRz})
        if (s == rotation_name(k)) return k;
    throw std::invalid_argument("unknown rotation kind '" + s + "'");
}

int rotation_arity(RotationKind k) {
    switch (k) {
        case RotationKind::Rz: return 1;
        case RotationKind::ccRn:
        case RotationKind::ccRz: return 3;
        default: return 2;
    }
}

std::vector<RotationTerm> rotation_expansion(RotationKind k, double theta) {
    using C = std::complex<double>;
    const C e = std::polar(1.0, theta);
    const C i(0, 1);
    const double c2 = std::cos(theta / 2), s2 = std::sin(theta / 2);
    auto t = [](const char* p, C v, const char* sym) { return RotationTerm{Pauli::parse(p), v, sym}; };
    switch (k) {
        case RotationKind::Rz: {
            const C g = std::polar(1.0, -theta / 2);
            return {t("I", g * (1.0 + e) / 2.0, "e^{-i t/2} (1+e^{i t})/2"),
                    t("Z", g * (1.0 - e) / 2.0, "e^{-i t/2} (1-e^{i t})/2")};
        }
        case RotationKind::cRz:
            return {t("II", (1 + c2) / 2, "(1+cos(t/2))/2"), t("ZI", (1 - c2) / 2, "(1-cos(t/2))/2"),
                    t("IZ", -i * s2 / 2.0, "-i sin(t/2)/2"), t("ZZ", i * s2 / 2.0, "i sin(t/2)/2")};
        case RotationKind::cRn:
            return {t("II", (3.0 + e) / 4.0, "(3+e^{i t})/4"), t("IZ", (1.0 - e) / 4.0, "(1-e^{i t})/4"),
                    t("ZI", (1.0 - e) / 4.0, "(1-e^{i t})/4"), t("ZZ", -(1.0 - e) / 4.0, "-(1-e^{i t})/4")};
        case RotationKind::Givens:
            return {t("II", (1 + std::cos(theta)) / 2, "(1+cos t)/2"), t("XY", i * std::sin(theta) / 2.0, "i sin(t)/2"),
                    t("YX", -i * std::sin(theta) / 2.0, "-i sin(t)/2"), t("ZZ", (1 - std::cos(theta)) / 2, "(1-cos t)/2")};
        case RotationKind::ccRn: {
            const C a = (1.0 - e) / 8.0;
            return {t("III", (7.0 + e) / 8.0, "(7+e^{i t})/8"), t("IIZ", a, "(1-e^{i t})/8"),
                    t("IZI", a, "(1-e^{i t})/8"),               t("ZII", a, "(1-e^{i t})/8"),
                    t("ZZI", -a, "-(1-e^{i t})/8"),             t("IZZ", -a, "-(1-e^{i t})/8"),
                    t("ZIZ", -a, "-(1-e^{i t})/8"),             t("ZZZ", a, "(1-e^{i t})/8")};
        }
        case RotationKind::ccRz: {
            const double a = (1 - c2) / 4;
            const C b = i * s2 / 4.0;
            return {t("III", (3 + c2) / 4, "(3+cos(t/2))/4"), t("ZII", a, "(1-cos(t/2))/4"),
                    t("IZI", a, "(1-cos(t/2))/4"),            t("ZZI", -a, "-(1-cos(t/2))/4"),
                    t("IIZ", -b, "-i sin(t/2)/4"),            t("IZZ", b, "i sin(t/2)/4"),
                    t("ZIZ", b, "i sin(t/2)/4"),              t("ZZZ", -b, "-i sin(t/2)/4")};
        }
    }
    throw std::invalid_argument("unknown rotation kind");
}

DenseMatrix rotation_unitary(RotationKind k, double theta) {
    using C = std::complex<double>;
    const int n = rotation_arity(k);
    const Eigen::Index d = Eigen::Index{1} << n;
    DenseMatrix u = DenseMatrix::Identity(d, d);
    switch (k) {
        case RotationKind::Rz:
            u(0, 0) = std::polar(1.0, -theta / 2);
            u(1, 1) = std::polar(1.0, theta / 2);
            break;
        case RotationKind::cRz:
        case RotationKind::ccRz:
            u(d - 2, d - 2) = std::polar(1.0, -theta / 2);
            u(d - 1, d - 1) = std::polar(1.0, theta / 2);
            break;
        case RotationKind::cRn:
        case RotationKind::ccRn: u(d - 1, d - 1) = std::polar(1.0, theta); break;
        case RotationKind::Givens:
            u(1, 1) = C(std::cos(theta));
            u(1, 2) = C(-std::sin(theta));
            u(2, 1) = C(std::sin(theta));
            u(2, 2) = C(std::cos(theta));
            break;
    }
    return u;
}

}  // namespace tof
