#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tof/clifford.hpp"
#include "tof/dyadic.hpp"
#include "tof/genset.hpp"
#include "tof/random.hpp"

namespace tof {

inline constexpr int kChannelLimit = 5;

using RealMatrix = Eigen::MatrixXd;

// Column j of M*S is sign[j] times column perm[j] of M.
struct SignedPermutation {
    std::vector<std::uint32_t> perm;
    std::vector<std::int8_t> sign;

    static SignedPermutation identity(std::size_t dim);
    static SignedPermutation random(std::size_t dim, Rng& rng);
    std::size_t size() const { return perm.size(); }
    SignedPermutation inverse() const;
    // Composite T with M*T = (M*this)*other.
    SignedPermutation then(const SignedPermutation& other) const;

    friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;
};

class ChannelMatrix;

// Non-trivial rows of a generator channel: entry (r,r) = 1/2 and
// (r, s[i]) = sign[i]/2. Rows in `unlisted` are rows of the identity.
struct CompactRow {
    std::uint32_t r = 0;
    std::array<std::uint32_t, 3> s{};
    std::array<std::int8_t, 3> sign{};
};

struct CompactRows {
    int n = 0;
    std::vector<CompactRow> rows;
    std::vector<std::uint32_t> unlisted;

    ChannelMatrix expand() const;
};

// Exact channel matrix: entry (r, c) = numerator(r, c) / 2^exponent, kept
// normalised so exponent() is the matrix sde. Rows/columns are PauliIndex.
class ChannelMatrix {
public:
    ChannelMatrix() = default;

    static ChannelMatrix identity(int n);
    static ChannelMatrix zero(int n);
    // Throws std::overflow_error if an entry does not fit the int64 fast path.
    static ChannelMatrix from_numerators(int n, std::vector<std::int64_t> nums, unsigned exponent);
    static ChannelMatrix from_dyadics(int n, const std::vector<Dyadic>& row_major);
    static ChannelMatrix from_signed_permutation(int n, const SignedPermutation& s);

    int qubits() const { return n_; }
    std::size_t dim() const { return dim_; }
    unsigned exponent() const { return exponent_; }
    std::int64_t numerator(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    const std::int64_t* row(std::size_t r) const { return data_.data() + r * dim_; }
    const std::vector<std::int64_t>& numerators() const { return data_; }
    Dyadic entry(std::size_t r, std::size_t c) const;
    std::vector<Dyadic> dyadic_entries() const;
    RealMatrix to_real() const;

    ChannelMatrix transpose() const;
    ChannelMatrix times(const SignedPermutation& s) const;
    // Returns the signed permutation if this is one.
    std::optional<SignedPermutation> as_signed_permutation() const;

    friend bool operator==(const ChannelMatrix& a, const ChannelMatrix& b) {
        return a.n_ == b.n_ && a.exponent_ == b.exponent_ && a.data_ == b.data_;
    }

private:
    friend ChannelMatrix mult_generator(const CompactRows& g, const ChannelMatrix& m);
    friend ChannelMatrix multiply(const ChannelMatrix& a, const ChannelMatrix& b);

    void normalize();
    void refresh_magnitude();

    int n_ = 0;
    std::size_t dim_ = 0;
    unsigned exponent_ = 0;
    unsigned magnitude_bits_ = 0;  // upper bound on the bit length of max |numerator|
    std::vector<std::int64_t> data_;
};

// Float channel <U>_{rs} = Tr(P_r U P_s U^dagger) / 2^n.
RealMatrix chan_rep_unitary(const DenseMatrix& u);

CompactRows chan_rep_generator(const GenTriple& t);

// <G> * m using the compact rows. Throws std::overflow_error if the int64
// fast path would overflow.
ChannelMatrix mult_generator(const CompactRows& g, const ChannelMatrix& m);
// Dense exact product.
ChannelMatrix multiply(const ChannelMatrix& a, const ChannelMatrix& b);

inline unsigned matrix_sde(const ChannelMatrix& m) { return m.exponent(); }
std::size_t matrix_hamming(const ChannelMatrix& m);
bool is_clifford_channel(const ChannelMatrix& m);
// Exact orthogonality check (M^T M = I) with bigint accumulation.
bool is_orthogonal(const ChannelMatrix& m);

// Exact channel of a Clifford circuit via its tableau.
ChannelMatrix channel_of_clifford(const Circuit& c);

struct Digest128 {
    std::uint64_t hi = 0, lo = 0;
    friend bool operator==(const Digest128&, const Digest128&) = default;
    std::string hex() const;
};

struct Digest128Hash {
    std::size_t operator()(const Digest128& d) const { return static_cast<std::size_t>(d.lo ^ (d.hi * 0x9e3779b97f4a7c15ULL)); }
};

// Canonical form of m modulo right multiplication by signed permutations.
struct CosetLabel {
    int n = 0;
    unsigned exponent = 0;
    std::vector<std::int64_t> columns;  // column-major, columns sorted

    Digest128 digest() const;
    std::string hex() const { return digest().hex(); }
    std::string serialize() const;
    ChannelMatrix matrix() const;

    friend bool operator==(const CosetLabel&, const CosetLabel&) = default;
};

struct LabelWithTransform {
    CosetLabel label;
    SignedPermutation transform;  // label.matrix() == m.times(transform)
};

CosetLabel coset_label(const ChannelMatrix& m);
LabelWithTransform coset_label_with_transform(const ChannelMatrix& m);
// If label(a) == label(b), returns S with b = a * S.
std::optional<SignedPermutation> recover_transform(const ChannelMatrix& a, const ChannelMatrix& b);

enum class TrailingKind { signed_permutation, clifford };

struct RandomInstance {
    ChannelMatrix matrix;
    std::vector<std::size_t> word;  // indices into the generating set
    std::size_t ground_truth = 0;   // word length, an upper bound on the count
    ChannelMatrix trailing;
    std::optional<Circuit> trailing_circuit;
};

RandomInstance random_chan_rep(const GenSet& gens, std::size_t tof_in, std::uint64_t seed,
                               TrailingKind trailing = TrailingKind::signed_permutation);
Circuit random_clifford_circuit(int n, Rng& rng, std::size_t gates = 0);

class RingError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr unsigned kSnapMaxExponent = 16;
inline constexpr double kSnapTolerance = 1e-10;

// Rounds a float channel to an exact one. Throws RingError naming the first
// entry that is not a/2^k (k <= max_exponent) within tol.
ChannelMatrix snap_to_dyadic(const RealMatrix& m, unsigned max_exponent = kSnapMaxExponent,
                             double tol = kSnapTolerance);

// Caches the compact rows of every generator in a set.
class GeneratorTable {
public:
    GeneratorTable() = default;
    explicit GeneratorTable(const GenSet& gens);

    const GenSet& gens() const { return gens_; }
    std::size_t size() const { return rows_.size(); }
    const CompactRows& rows(std::size_t i) const { return rows_[i]; }
    const GenTriple& triple(std::size_t i) const { return gens_.triples[i]; }
    const GenTriple& canonical(std::size_t i) const { return canonical_[i]; }
    // Same generator up to permutation and product substitution of its Paulis.
    bool same_generator(std::size_t i, std::size_t j) const { return canonical_[i] == canonical_[j]; }

private:
    GenSet gens_;
    std::vector<CompactRows> rows_;
    std::vector<GenTriple> canonical_;
};

}  // namespace tof
