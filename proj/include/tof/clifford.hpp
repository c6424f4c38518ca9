#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tof/pauli.hpp"

namespace tof {

class ChannelMatrix;
struct GenTriple;

enum class GateKind { H, S, Sdg, X, Z, CNOT, SWAP, TOF };

// Operands are 1-based. CNOT is (control, target); TOF is (control, control, target).
struct Gate {
    GateKind kind = GateKind::H;
    std::array<int, 3> q{0, 0, 0};

    int arity() const;
    std::string str() const;
    friend bool operator==(const Gate&, const Gate&) = default;
};

Gate gate_h(int q);
Gate gate_s(int q);
Gate gate_sdg(int q);
Gate gate_x(int q);
Gate gate_z(int q);
Gate gate_cnot(int c, int t);
Gate gate_swap(int a, int b);
Gate gate_tof(int a, int b, int c);

struct Circuit {
    int n = 0;
    std::vector<Gate> gates;
    std::optional<double> global_phase;

    Circuit() = default;
    explicit Circuit(int qubits) : n(qubits) {}

    void add(const Gate& g);
    void append(const Circuit& other);
    std::size_t toffoli_count() const;
    bool is_clifford() const { return toffoli_count() == 0; }
    // Reversed order with S and Sdg swapped; every other gate is self-inverse.
    Circuit inverse() const;

    std::string str() const;
    // One gate per line, '#' comments. n = 0 infers the width from a
    // "# qubits N" comment or the largest operand.
    static Circuit parse(std::string_view text, int n = 0);
};

SignedPauli conjugate_gate(const Gate& g, SignedPauli p);
// C p C^dagger for a Clifford circuit C (gates applied in time order).
SignedPauli conjugate_pauli(const Circuit& c, const SignedPauli& p);

// Images of X_1..X_n and Z_1..Z_n under conjugation.
struct Tableau {
    int n = 0;
    std::vector<SignedPauli> x_images;
    std::vector<SignedPauli> z_images;

    static Tableau identity(int n);
    static Tableau from_circuit(const Circuit& c);

    SignedPauli apply(const SignedPauli& p) const;
    bool is_symplectic() const;
    Circuit to_circuit() const;
};

struct TripleMapping {
    Circuit conjugator;  // C with C Z_a C^dagger = t1, C Z_b C^dagger = t2, C X_c C^dagger = t3
    int a = 0, b = 0, c = 0;
};

TripleMapping clifford_mapping_triple(const Pauli& t1, const Pauli& t2, const Pauli& t3);

// Throws std::invalid_argument("not a Clifford channel") if m is not the
// channel of a Clifford.
Circuit clifford_from_channel(const ChannelMatrix& m);

DenseMatrix circuit_to_unitary(const Circuit& c);
// Left-multiplies m in place by the gate unitary.
void apply_gate(const Gate& g, int n, DenseMatrix& m);

double global_phase_distance(const DenseMatrix& u, const DenseMatrix& w);

struct VerificationReport {
    bool pass = false;
    std::string mode;  // "dense" or "exact"
    double distance = 0.0;
    std::string detail;
};

inline constexpr double kVerifyThreshold = 1e-9;

VerificationReport verify_decomposition(const DenseMatrix& target, const std::vector<GenTriple>& word,
                                        const Circuit& trailing, double threshold = kVerifyThreshold);
VerificationReport verify_decomposition(const ChannelMatrix& target, const std::vector<GenTriple>& word,
                                        const Circuit& trailing);
// Exact check with the trailing factor given as a channel matrix.
VerificationReport verify_decomposition(const ChannelMatrix& target, const std::vector<GenTriple>& word,
                                        const ChannelMatrix& trailing);

}  // namespace tof
