#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tof {

using Bits = std::uint64_t;
using PauliIndex = std::uint64_t;
using DenseMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 31;
inline constexpr int kDenseLimit = 10;

// Unsigned n-qubit Pauli in symplectic form. Qubit 1 is the most significant
// bit of x and z and the leftmost character of the string form.
struct Pauli {
    int n = 0;
    Bits x = 0;
    Bits z = 0;

    static Pauli identity(int n);
    static Pauli parse(std::string_view s);
    static Pauli from_index(int n, PauliIndex idx);
    // Single-qubit letter 'I','X','Y','Z' on qubit q (1-based).
    static Pauli single(int n, int q, char letter);

    PauliIndex index() const;
    std::string str() const;
    bool is_identity() const { return x == 0 && z == 0; }
    int weight() const;
    char letter(int q) const;

    friend bool operator==(const Pauli&, const Pauli&) = default;
};

// Phase is i^phase with phase in {0,1,2,3}. Y is the Hermitian letter, so
// SignedPauli{0, Y} is +Y.
struct SignedPauli {
    int phase = 0;
    Pauli pauli;

    static SignedPauli parse(std::string_view s);
    std::string str() const;
    bool hermitian() const { return (phase & 1) == 0; }
    bool negative() const { return phase == 2; }

    friend bool operator==(const SignedPauli&, const SignedPauli&) = default;
};

inline bool operator<(const Pauli& a, const Pauli& b) { return a.index() < b.index(); }

SignedPauli pauli_mul(const SignedPauli& a, const SignedPauli& b);
inline SignedPauli pauli_mul(const Pauli& a, const Pauli& b) { return pauli_mul(SignedPauli{0, a}, SignedPauli{0, b}); }
// Product with the phase dropped.
Pauli unsigned_product(const Pauli& a, const Pauli& b);
bool pauli_commutes(const Pauli& p, const Pauli& q);

DenseMatrix pauli_matrix(const SignedPauli& p);
inline DenseMatrix pauli_matrix(const Pauli& p) { return pauli_matrix(SignedPauli{0, p}); }

// q_P = Tr(u P) / 2^n for every P, indexed by PauliIndex.
std::vector<std::complex<double>> pauli_coefficients(const DenseMatrix& u);

// Tr(u P) for every P, indexed by PauliIndex (no normalisation).
std::vector<std::complex<double>> pauli_traces(const DenseMatrix& u);

int qubits_of_dimension(Eigen::Index dim);

}  // namespace tof
