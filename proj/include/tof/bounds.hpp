#pragma once

#include <complex>
#include <string>
#include <vector>

#include "tof/dyadic.hpp"

#include "tof/pauli.hpp"

namespace tof {

using Rational = boost::multiprecision::cpp_rational;

// Upper bounds on the generating-set sizes for Clifford+Toffoli and Clifford+CS.
Rational gen_set_bound_tof(int n);
Rational gen_set_bound_cs(int n);

// Integer, exact terminating decimal, or "a/b".
std::string format_rational(const Rational& r);

// Both bounds are clamped at 0 and carry an unspecified constant c (default 1).
// Throws std::invalid_argument for non-positive inputs.
double lower_bound_approx(double alpha_max, double m, double epsilon, double c = 1.0);
double lower_bound_exact(double alpha_max, double m, double c = 1.0);

enum class RotationKind { Rz, cRz, cRn, Givens, ccRn, ccRz };

const char* rotation_name(RotationKind k);
RotationKind parse_rotation(const std::string& s);
int rotation_arity(RotationKind k);

struct RotationTerm {
    Pauli pauli;
    std::complex<double> coefficient;
    std::string symbolic;
};

// Pauli expansion of the rotation gate at angle theta (global phase included).
std::vector<RotationTerm> rotation_expansion(RotationKind k, double theta);
DenseMatrix rotation_unitary(RotationKind k, double theta);

}  // namespace tof
