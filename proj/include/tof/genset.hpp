#pragma once

#include <array>
#include <string>
#include <vector>

#include "tof/clifford.hpp"
#include "tof/pauli.hpp"

namespace tof {

// G_{p1,p2,p3} = (3/4)I + (1/4)(p1 + p2 + p3 - p1p2 - p2p3 - p3p1 + p1p2p3).
struct GenTriple {
    Pauli p1, p2, p3;

    int n() const { return p1.n; }
    // Non-identity elements of the unsigned subgroup, sorted by PauliIndex.
    std::array<Pauli, 7> subgroup() const;
    std::string str() const;

    friend bool operator==(const GenTriple&, const GenTriple&) = default;
};

bool operator<(const GenTriple& a, const GenTriple& b);

// Throws std::invalid_argument on identity, repeated, anticommuting or rank-2 input.
void validate_triple(const Pauli& p1, const Pauli& p2, const Pauli& p3);
GenTriple canonical_triple(const Pauli& p1, const Pauli& p2, const Pauli& p3);
inline GenTriple canonical_triple(const GenTriple& t) { return canonical_triple(t.p1, t.p2, t.p3); }

enum class GenSetMode { canonical, paper_compat };

const char* mode_name(GenSetMode m);
GenSetMode parse_mode(const std::string& s);

struct GenSet {
    int n = 0;
    GenSetMode mode = GenSetMode::canonical;
    std::vector<GenTriple> triples;
    std::string diagnostic;

    std::size_t size() const { return triples.size(); }
};

GenSet generate_gen_set(int n, GenSetMode mode = GenSetMode::canonical);

DenseMatrix gen_element_unitary(const GenTriple& t);
// C^dagger-gates, TOF(a,b;c), C-gates, where C maps Z_a, Z_b, X_c onto the triple.
Circuit gen_element_circuit(const GenTriple& t);
// Circuit for G_word[0] ... G_word[m-1] * trailing, gates in time order.
Circuit decomposition_circuit(const std::vector<GenTriple>& word, const Circuit& trailing);

}  // namespace tof
