#include "tof/channel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "tof/simd/kernels.hpp"

namespace tof {
namespace {

void check_channel_n(int n) {
    if (n < 1 || n > kChannelLimit)
        throw std::length_error("channel matrices are limited to 1 <= n <= " + std::to_string(kChannelLimit) +
                                " (got " + std::to_string(n) + ")");
}

unsigned bit_length(std::uint64_t v) { return v ? 64u - static_cast<unsigned>(std::countl_zero(v)) : 0u; }

unsigned ctz_or_64(std::uint64_t v) { return v ? static_cast<unsigned>(std::countr_zero(v)) : 64u; }

constexpr unsigned kMaxMagnitudeBits = 61;

}  // namespace

// ---------------------------------------------------------------- permutations

SignedPermutation SignedPermutation::identity(std::size_t dim) {
    SignedPermutation s;
    s.perm.resize(dim);
    std::iota(s.perm.begin(), s.perm.end(), 0u);
    s.sign.assign(dim, 1);
    return s;
}

SignedPermutation SignedPermutation::random(std::size_t dim, Rng& rng) {
    SignedPermutation s = identity(dim);
    shuffle(s.perm, rng);
    for (auto& v : s.sign) v = (rng() & 1) ? -1 : 1;
    return s;
}

SignedPermutation SignedPermutation::inverse() const {
    SignedPermutation t;
    t.perm.resize(size());
    t.sign.resize(size());
    for (std::size_t j = 0; j < size(); ++j) {
        t.perm[perm[j]] = static_cast<std::uint32_t>(j);
        t.sign[perm[j]] = sign[j];
    }
    return t;
}

SignedPermutation SignedPermutation::then(const SignedPermutation& other) const {
    if (other.size() != size()) throw std::invalid_argument("permutation size mismatch");
    SignedPermutation t;
    t.perm.resize(size());
    t.sign.resize(size());
    for (std::size_t j = 0; j < size(); ++j) {
        std::uint32_t q = other.perm[j];
        t.perm[j] = perm[q];
        t.sign[j] = static_cast<std::int8_t>(other.sign[j] * sign[q]);
    }
    return t;
}

// ---------------------------------------------------------------- ChannelMatrix

ChannelMatrix ChannelMatrix::zero(int n) {
    check_channel_n(n);
    ChannelMatrix m;
    m.n_ = n;
    m.dim_ = std::size_t{1} << (2 * n);
    m.data_.assign(m.dim_ * m.dim_, 0);
    return m;
}

ChannelMatrix ChannelMatrix::identity(int n) {
    ChannelMatrix m = zero(n);
    for (std::size_t i = 0; i < m.dim_; ++i) m.data_[i * m.dim_ + i] = 1;
    m.magnitude_bits_ = 1;
    return m;
}

ChannelMatrix ChannelMatrix::from_numerators(int n, std::vector<std::int64_t> nums, unsigned exponent) {
    ChannelMatrix m = zero(n);
    if (nums.size() != m.dim_ * m.dim_) throw std::invalid_argument("channel matrix has wrong number of entries");
    for (auto v : nums)
        if (v == std::numeric_limits<std::int64_t>::min()) throw std::overflow_error("numerator out of range");
    m.data_ = std::move(nums);
    m.exponent_ = exponent;
    m.refresh_magnitude();
    if (m.magnitude_bits_ > kMaxMagnitudeBits) throw std::overflow_error("numerator exceeds the int64 fast path");
    m.normalize();
    return m;
}

ChannelMatrix ChannelMatrix::from_dyadics(int n, const std::vector<Dyadic>& row_major) {
    ChannelMatrix m = zero(n);
    if (row_major.size() != m.dim_ * m.dim_) throw std::invalid_argument("channel matrix has wrong number of entries");
    unsigned k = 0;
    for (const auto& d : row_major) k = std::max(k, d.exponent());
    const BigInt limit = BigInt(1) << kMaxMagnitudeBits;
    for (std::size_t i = 0; i < row_major.size(); ++i) {
        BigInt a = row_major[i].scaled_numerator(k);
        if (abs(a) >= limit) throw std::overflow_error("numerator exceeds the int64 fast path");
        m.data_[i] = a.convert_to<std::int64_t>();
    }
    m.exponent_ = k;
    m.refresh_magnitude();
    m.normalize();
    return m;
}

ChannelMatrix ChannelMatrix::from_signed_permutation(int n, const SignedPermutation& s) {
    ChannelMatrix m = zero(n);
    if (s.size() != m.dim_) throw std::invalid_argument("permutation size mismatch");
    for (std::size_t j = 0; j < m.dim_; ++j) m.data_[s.perm[j] * m.dim_ + j] = s.sign[j];
    m.magnitude_bits_ = 1;
    return m;
}

void ChannelMatrix::refresh_magnitude() {
    magnitude_bits_ = bit_length(simd::kernels().magnitude_or(data_.data(), data_.size()));
}

void ChannelMatrix::normalize() {
    const auto& k = simd::kernels();
    std::uint64_t all = k.or_reduce(data_.data(), data_.size());
    if (all == 0) {
        exponent_ = 0;
        return;
    }
    unsigned s = std::min<unsigned>(ctz_or_64(all), exponent_);
    if (s) {
        k.shift_right(data_.data(), data_.size(), s);
        exponent_ -= s;
        magnitude_bits_ = magnitude_bits_ > s ? magnitude_bits_ - s : 1;
    }
}

Dyadic ChannelMatrix::entry(std::size_t r, std::size_t c) const { return Dyadic(BigInt(numerator(r, c)), exponent_); }

std::vector<Dyadic> ChannelMatrix::dyadic_entries() const {
    std::vector<Dyadic> out;
    out.reserve(data_.size());
    for (auto v : data_) out.emplace_back(BigInt(v), exponent_);
    return out;
}

RealMatrix ChannelMatrix::to_real() const {
    RealMatrix r(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    const double scale = std::ldexp(1.0, -static_cast<int>(exponent_));
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(numerator(i, j)) * scale;
    return r;
}

ChannelMatrix ChannelMatrix::transpose() const {
    ChannelMatrix t = *this;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) t.data_[j * dim_ + i] = data_[i * dim_ + j];
    return t;
}

ChannelMatrix ChannelMatrix::times(const SignedPermutation& s) const {
    if (s.size() != dim_) throw std::invalid_argument("permutation size mismatch");
    ChannelMatrix out = *this;
    for (std::size_t i = 0; i < dim_; ++i) {
        const std::int64_t* src = row(i);
        std::int64_t* dst = out.data_.data() + i * dim_;
        for (std::size_t j = 0; j < dim_; ++j) dst[j] = s.sign[j] * src[s.perm[j]];
    }
    return out;
}

std::optional<SignedPermutation> ChannelMatrix::as_signed_permutation() const {
    if (exponent_ != 0) return std::nullopt;
    SignedPermutation s;
    s.perm.assign(dim_, 0);
    s.sign.assign(dim_, 0);
    std::vector<char> row_used(dim_, 0);
    for (std::size_t j = 0; j < dim_; ++j) {
        int found = 0;
        for (std::size_t i = 0; i < dim_; ++i) {
            std::int64_t v = numerator(i, j);
            if (!v) continue;
            if ((v != 1 && v != -1) || found++ || row_used[i]) return std::nullopt;
            row_used[i] = 1;
            s.perm[j] = static_cast<std::uint32_t>(i);
            s.sign[j] = static_cast<std::int8_t>(v);
        }
        if (!found) return std::nullopt;
    }
    return s;
}

// ---------------------------------------------------------------- float channel

RealMatrix chan_rep_unitary(const DenseMatrix& u) {
    if (u.rows() != u.cols()) throw std::invalid_argument("non-square matrix");
    const int n = qubits_of_dimension(u.rows());
    check_channel_n(n);
    const Eigen::Index d = u.rows();
    if (((u.adjoint() * u) - DenseMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("non-unitary input");
    const std::size_t dim = std::size_t{1} << (2 * n);
    RealMatrix out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const DenseMatrix ud = u.adjoint();
    const double inv = 1.0 / static_cast<double>(d);
    for (std::size_t s = 0; s < dim; ++s) {
        DenseMatrix a = u * pauli_matrix(Pauli::from_index(n, s)) * ud;
        auto tr = pauli_traces(a);
        for (std::size_t r = 0; r < dim; ++r)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = tr[r].real() * inv;
    }
    return out;
}

// ---------------------------------------------------------------- generators

CompactRows chan_rep_generator(const GenTriple& t) {
    validate_triple(t.p1, t.p2, t.p3);
    const int n = t.n();
    check_channel_n(n);
    struct Term {
        SignedPauli p;
        int quarter;  // coefficient in units of 1/4
    };
    const SignedPauli a{0, t.p1}, b{0, t.p2}, c{0, t.p3};
    const Term terms[8] = {{{0, Pauli::identity(n)}, 3}, {a, 1}, {b, 1}, {c, 1},
                           {pauli_mul(a, b), -1},       {pauli_mul(b, c), -1},
                           {pauli_mul(c, a), -1},       {pauli_mul(pauli_mul(a, b), c), 1}};
    CompactRows out;
    out.n = n;
    const std::size_t dim = std::size_t{1} << (2 * n);
    struct Acc {
        PauliIndex idx;
        long re, im;
    };
    std::vector<Acc> acc;
    for (std::size_t r = 0; r < dim; ++r) {
        const Pauli pr = Pauli::from_index(n, r);
        if (pauli_commutes(pr, t.p1) && pauli_commutes(pr, t.p2) && pauli_commutes(pr, t.p3)) {
            out.unlisted.push_back(static_cast<std::uint32_t>(r));
            continue;
        }
        // Row r equals column r (G is Hermitian): expand G P_r G in 1/16 units.
        acc.clear();
        for (const auto& ta : terms) {
            const SignedPauli left = pauli_mul(ta.p, SignedPauli{0, pr});
            for (const auto& tb : terms) {
                const SignedPauli prod = pauli_mul(left, tb.p);
                const PauliIndex idx = prod.pauli.index();
                long v = ta.quarter * tb.quarter;
                long re = 0, im = 0;
                switch (prod.phase) {
                    case 0: re = v; break;
                    case 1: im = v; break;
                    case 2: re = -v; break;
                    default: im = -v; break;
                }
                auto it = std::find_if(acc.begin(), acc.end(), [&](const Acc& x) { return x.idx == idx; });
                if (it == acc.end()) acc.push_back({idx, re, im});
                else {
                    it->re += re;
                    it->im += im;
                }
            }
        }
        CompactRow row;
        row.r = static_cast<std::uint32_t>(r);
        int off = 0;
        bool diag_ok = false;
        for (const auto& e : acc) {
            if (e.im != 0) throw std::logic_error("generator channel entry is not real");
            if (e.re == 0) continue;
            if (e.idx == r) {
                diag_ok = e.re == 8;
                continue;
            }
            if ((e.re != 8 && e.re != -8) || off >= 3) throw std::logic_error("unexpected generator row structure");
            row.s[off] = static_cast<std::uint32_t>(e.idx);
            row.sign[off] = e.re > 0 ? 1 : -1;
            ++off;
        }
        if (!diag_ok || off != 3) throw std::logic_error("unexpected generator row structure");
        out.rows.push_back(row);
    }
    return out;
}

ChannelMatrix CompactRows::expand() const {
    ChannelMatrix m = ChannelMatrix::zero(n);
    std::vector<std::int64_t> nums(m.dim() * m.dim(), 0);
    for (auto r : unlisted) nums[r * m.dim() + r] = 2;
    for (const auto& row : rows) {
        nums[row.r * m.dim() + row.r] = 1;
        for (int i = 0; i < 3; ++i) nums[row.r * m.dim() + row.s[i]] = row.sign[i];
    }
    return ChannelMatrix::from_numerators(n, std::move(nums), 1);
}

ChannelMatrix mult_generator(const CompactRows& g, const ChannelMatrix& m) {
    if (g.n != m.n_) throw std::invalid_argument("dimension mismatch");
    const auto& k = simd::kernels();
    const std::size_t dim = m.dim_;
    unsigned bits = m.magnitude_bits_;
    if (bits + 2 > kMaxMagnitudeBits) {
        bits = bit_length(k.magnitude_or(m.data_.data(), m.data_.size()));
        if (bits + 2 > kMaxMagnitudeBits) throw std::overflow_error("structured multiply would overflow int64");
    }
    ChannelMatrix out;
    out.n_ = m.n_;
    out.dim_ = dim;
    out.data_.resize(dim * dim);

    std::uint64_t or_listed = 0;
    for (const auto& row : g.rows) {
        or_listed |= k.signed_sum4(out.data_.data() + row.r * dim, m.row(row.r), m.row(row.s[0]), m.row(row.s[1]),
                                   m.row(row.s[2]), row.sign[0], row.sign[1], row.sign[2], dim);
    }
    std::uint64_t or_unlisted = 0;
    for (auto r : g.unlisted) {
        std::copy_n(m.row(r), dim, out.data_.data() + r * dim);
        or_unlisted |= k.or_reduce(m.row(r), dim);
    }

    if (or_listed & 1) {
        // Some sum is odd: the denominator grows by one.
        for (auto r : g.unlisted) k.shift_left(out.data_.data() + r * dim, dim, 1);
        out.exponent_ = m.exponent_ + 1;
        out.magnitude_bits_ = bits + 2;
    } else {
        unsigned tz = std::min(ctz_or_64(or_listed) - (or_listed ? 1u : 0u), ctz_or_64(or_unlisted));
        unsigned s = std::min(tz, m.exponent_);
        for (const auto& row : g.rows) k.shift_right(out.data_.data() + row.r * dim, dim, s + 1);
        if (s)
            for (auto r : g.unlisted) k.shift_right(out.data_.data() + r * dim, dim, s);
        out.exponent_ = m.exponent_ - s;
        out.magnitude_bits_ = bits + 1 > s ? bits + 1 - s : 1;
        if ((or_listed | or_unlisted) == 0) out.exponent_ = 0;
    }
    return out;
}

ChannelMatrix multiply(const ChannelMatrix& a, const ChannelMatrix& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("dimension mismatch");
    const std::size_t dim = a.dim_;
    std::vector<__int128> acc(dim * dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
        __int128* dst = acc.data() + i * dim;
        for (std::size_t l = 0; l < dim; ++l) {
            const __int128 av = a.numerator(i, l);
            if (!av) continue;
            const std::int64_t* br = b.row(l);
            for (std::size_t j = 0; j < dim; ++j) dst[j] += av * br[j];
        }
    }
    unsigned exponent = a.exponent_ + b.exponent_;
    unsigned __int128 all = 0;
    for (auto v : acc) all |= static_cast<unsigned __int128>(v);
    unsigned s = 0;
    while (s < exponent && all && !((all >> s) & 1)) ++s;
    const __int128 limit = static_cast<__int128>(1) << kMaxMagnitudeBits;
    std::vector<std::int64_t> nums(dim * dim);
    for (std::size_t i = 0; i < acc.size(); ++i) {
        __int128 v = acc[i] >> s;
        if (v >= limit || v <= -limit) throw std::overflow_error("dense product exceeds the int64 fast path");
        nums[i] = static_cast<std::int64_t>(v);
    }
    return ChannelMatrix::from_numerators(a.n_, std::move(nums), all ? exponent - s : 0);
}

std::size_t matrix_hamming(const ChannelMatrix& m) {
    return simd::kernels().count_nonzero(m.numerators().data(), m.numerators().size());
}

bool is_clifford_channel(const ChannelMatrix& m) { return m.as_signed_permutation().has_value(); }

bool is_orthogonal(const ChannelMatrix& m) {
    const std::size_t dim = m.dim();
    const BigInt unit = BigInt(1) << (2 * m.exponent());
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            BigInt s = 0;
            for (std::size_t l = 0; l < dim; ++l) s += BigInt(m.numerator(l, i)) * m.numerator(l, j);
            if (s != (i == j ? unit : BigInt(0))) return false;
        }
    }
    return true;
}

ChannelMatrix channel_of_clifford(const Circuit& c) {
    if (!c.is_clifford()) throw std::invalid_argument("circuit contains TOF gates");
    check_channel_n(c.n);
    const Tableau t = Tableau::from_circuit(c);
    const std::size_t dim = std::size_t{1} << (2 * c.n);
    SignedPermutation s;
    s.perm.resize(dim);
    s.sign.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        SignedPauli img = t.apply(SignedPauli{0, Pauli::from_index(c.n, j)});
        s.perm[j] = static_cast<std::uint32_t>(img.pauli.index());
        s.sign[j] = img.negative() ? -1 : 1;
    }
    return ChannelMatrix::from_signed_permutation(c.n, s);
}

// ---------------------------------------------------------------- coset labels

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::string Digest128::hex() const {
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(lo));
    return buf;
}

Digest128 CosetLabel::digest() const {
    std::uint64_t h1 = 0x243f6a8885a308d3ULL ^ static_cast<std::uint64_t>(n);
    std::uint64_t h2 = 0x13198a2e03707344ULL ^ (static_cast<std::uint64_t>(exponent) << 8);
    for (auto v : columns) {
        const auto w = static_cast<std::uint64_t>(v);
        h1 = mix64(h1 ^ w) + 0x9e3779b97f4a7c15ULL;
        h2 = mix64(h2 + (w * 0xff51afd7ed558ccdULL)) ^ (h2 >> 17);
    }
    return {mix64(h1 ^ (h2 << 1)), mix64(h2 + 0xc4ceb9fe1a85ec53ULL)};
}

std::string CosetLabel::serialize() const {
    std::string s = std::to_string(n) + ":" + std::to_string(exponent) + ":";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(columns[i]);
    }
    return s;
}

ChannelMatrix CosetLabel::matrix() const {
    const std::size_t dim = std::size_t{1} << (2 * n);
    std::vector<std::int64_t> nums(dim * dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t i = 0; i < dim; ++i) nums[i * dim + j] = columns[j * dim + i];
    return ChannelMatrix::from_numerators(n, std::move(nums), exponent);
}

LabelWithTransform coset_label_with_transform(const ChannelMatrix& m) {
    const std::size_t dim = m.dim();
    std::vector<std::int64_t> cols(dim * dim);
    std::vector<std::int8_t> sign(dim, 1);
    for (std::size_t i = 0; i < dim; ++i) {
        const std::int64_t* r = m.row(i);
        for (std::size_t j = 0; j < dim; ++j) cols[j * dim + i] = r[j];
    }
    for (std::size_t j = 0; j < dim; ++j) {
        std::int64_t* c = cols.data() + j * dim;
        std::size_t i = 0;
        while (i < dim && c[i] == 0) ++i;
        if (i < dim && c[i] < 0) {
            sign[j] = -1;
            for (std::size_t l = 0; l < dim; ++l) c[l] = -c[l];
        }
    }
    std::vector<std::uint32_t> order(dim);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const std::int64_t* ca = cols.data() + a * dim;
        const std::int64_t* cb = cols.data() + b * dim;
        return std::lexicographical_compare(ca, ca + dim, cb, cb + dim);
    });
    LabelWithTransform out;
    out.label.n = m.qubits();
    out.label.exponent = m.exponent();
    out.label.columns.resize(dim * dim);
    out.transform.perm = order;
    out.transform.sign.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        std::copy_n(cols.data() + order[j] * dim, dim, out.label.columns.data() + j * dim);
        out.transform.sign[j] = sign[order[j]];
    }
    return out;
}

CosetLabel coset_label(const ChannelMatrix& m) { return coset_label_with_transform(m).label; }

std::optional<SignedPermutation> recover_transform(const ChannelMatrix& a, const ChannelMatrix& b) {
    auto la = coset_label_with_transform(a);
    auto lb = coset_label_with_transform(b);
    if (!(la.label == lb.label)) return std::nullopt;
    return la.transform.then(lb.transform.inverse());
}

// ---------------------------------------------------------------- random instances

Circuit random_clifford_circuit(int n, Rng& rng, std::size_t gates) {
    if (gates == 0) gates = static_cast<std::size_t>(8 * n * n);
    Circuit c(n);
    for (std::size_t i = 0; i < gates; ++i) {
        const auto kind = n > 1 ? uniform_below(rng, 3) : uniform_below(rng, 2);
        const int a = static_cast<int>(uniform_below(rng, n)) + 1;
        if (kind == 0) c.add(gate_h(a));
        else if (kind == 1) c.add(gate_s(a));
        else {
            int b = static_cast<int>(uniform_below(rng, n - 1)) + 1;
            if (b >= a) ++b;
            c.add(gate_cnot(a, b));
        }
    }
    return c;
}

RandomInstance random_chan_rep(const GenSet& gens, std::size_t tof_in, std::uint64_t seed, TrailingKind trailing) {
    if (gens.n < 3) throw std::invalid_argument("random instances need n >= 3");
    if (tof_in > 0 && gens.triples.empty()) throw std::invalid_argument("empty generating set");
    Rng rng(seed);
    RandomInstance inst;
    std::vector<GenTriple> canon;
    canon.reserve(gens.size());
    for (const auto& t : gens.triples) canon.push_back(canonical_triple(t));
    for (std::size_t i = 0; i < tof_in; ++i) {
        std::size_t g;
        do {
            g = uniform_below(rng, gens.size());
        } while (!inst.word.empty() && canon[g] == canon[inst.word.back()] && gens.size() > 1);
        inst.word.push_back(g);
    }
    const std::size_t dim = std::size_t{1} << (2 * gens.n);
    if (trailing == TrailingKind::clifford) {
        inst.trailing_circuit = random_clifford_circuit(gens.n, rng);
        inst.trailing = channel_of_clifford(*inst.trailing_circuit);
    } else {
        inst.trailing = ChannelMatrix::from_signed_permutation(gens.n, SignedPermutation::random(dim, rng));
    }
    ChannelMatrix m = inst.trailing;
    for (auto it = inst.word.rbegin(); it != inst.word.rend(); ++it)
        m = mult_generator(chan_rep_generator(gens.triples[*it]), m);
    inst.matrix = std::move(m);
    inst.ground_truth = tof_in;
    return inst;
}

// ---------------------------------------------------------------- exactness

ChannelMatrix snap_to_dyadic(const RealMatrix& m, unsigned max_exponent, double tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("non-square channel");
    const Eigen::Index dim = m.rows();
    int n = 0;
    while ((Eigen::Index{1} << (2 * n)) < dim) ++n;
    if ((Eigen::Index{1} << (2 * n)) != dim) throw std::invalid_argument("channel dimension is not 4^n");
    std::vector<Dyadic> entries;
    entries.reserve(static_cast<std::size_t>(dim * dim));
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            const double v = m(r, c);
            bool ok = false;
            for (unsigned k = 0; k <= max_exponent && !ok; ++k) {
                const double scaled = std::ldexp(v, static_cast<int>(k));
                const double a = std::nearbyint(scaled);
                if (std::abs(v - std::ldexp(a, -static_cast<int>(k))) <= tol) {
                    entries.emplace_back(BigInt(static_cast<long long>(a)), k);
                    ok = true;
                }
            }
            if (!ok) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "entry not in Z[1/2] at (%s, %s): %.12g; not exactly implementable over Clifford+Toffoli",
                              Pauli::from_index(n, static_cast<PauliIndex>(r)).str().c_str(),
                              Pauli::from_index(n, static_cast<PauliIndex>(c)).str().c_str(), v);
                throw RingError(buf);
            }
        }
    }
    return ChannelMatrix::from_dyadics(n, entries);
}

// ---------------------------------------------------------------- table

GeneratorTable::GeneratorTable(const GenSet& gens) : gens_(gens) {
    rows_.reserve(gens.size());
    canonical_.reserve(gens.size());
    for (const auto& t : gens.triples) {
        rows_.push_back(chan_rep_generator(t));
        canonical_.push_back(canonical_triple(t));
    }
}

}  // namespace tof
