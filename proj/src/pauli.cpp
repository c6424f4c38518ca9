#include "tof/pauli.hpp"

#include <bit>
#include <stdexcept>

#include "tof/simd/kernels.hpp"

namespace tof {
namespace {

void check_n(int n) {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("qubit count out of range: " + std::to_string(n));
}

Bits qubit_bit(int n, int q) { return Bits{1} << (n - q); }

int popcount(Bits b) { return std::popcount(b); }

}  // namespace

Pauli Pauli::identity(int n) {
    check_n(n);
    return Pauli{n, 0, 0};
}

Pauli Pauli::parse(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty Pauli string");
    Pauli p;
    p.n = static_cast<int>(s.size());
    check_n(p.n);
    for (char ch : s) {
        p.x <<= 1;
        p.z <<= 1;
        switch (ch) {
            case 'I': break;
            case 'X': p.x |= 1; break;
            case 'Y': p.x |= 1; p.z |= 1; break;
            case 'Z': p.z |= 1; break;
            default: throw std::invalid_argument("bad Pauli letter '" + std::string(1, ch) + "' in \"" + std::string(s) + "\"");
        }
    }
    return p;
}

Pauli Pauli::from_index(int n, PauliIndex idx) {
    check_n(n);
    Pauli p{n, 0, 0};
    for (int q = n; q >= 1; --q) {
        unsigned d = idx & 3;
        idx >>= 2;
        Bits b = qubit_bit(n, q);
        if (d == 1 || d == 2) p.x |= b;
        if (d == 2 || d == 3) p.z |= b;
    }
    if (idx != 0) throw std::invalid_argument("Pauli index out of range");
    return p;
}

Pauli Pauli::single(int n, int q, char letter) {
    check_n(n);
    if (q < 1 || q > n) throw std::invalid_argument("qubit out of range");
    Pauli p{n, 0, 0};
    Bits b = qubit_bit(n, q);
    if (letter == 'X' || letter == 'Y') p.x = b;
    if (letter == 'Z' || letter == 'Y') p.z = b;
    return p;
}

PauliIndex Pauli::index() const {
    PauliIndex idx = 0;
    for (int q = 1; q <= n; ++q) {
        Bits b = qubit_bit(n, q);
        bool xb = x & b, zb = z & b;
        idx = (idx << 2) | (xb ? (zb ? 2u : 1u) : (zb ? 3u : 0u));
    }
    return idx;
}

char Pauli::letter(int q) const {
    Bits b = qubit_bit(n, q);
    bool xb = x & b, zb = z & b;
    return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
}

std::string Pauli::str() const {
    std::string s;
    s.reserve(n);
    for (int q = 1; q <= n; ++q) s.push_back(letter(q));
    return s;
}

int Pauli::weight() const { return popcount(x | z); }

SignedPauli SignedPauli::parse(std::string_view s) {
    int phase = 0;
    if (s.starts_with("-i")) {
        phase = 3;
        s.remove_prefix(2);
    } else if (s.starts_with("+i")) {
        phase = 1;
        s.remove_prefix(2);
    } else if (s.starts_with("i")) {
        phase = 1;
        s.remove_prefix(1);
    } else if (s.starts_with("-")) {
        phase = 2;
        s.remove_prefix(1);
    } else if (s.starts_with("+")) {
        s.remove_prefix(1);
    }
    return SignedPauli{phase, Pauli::parse(s)};
}

std::string SignedPauli::str() const {
    static const char* prefix[4] = {"", "i", "-", "-i"};
    return prefix[phase & 3] + pauli.str();
}

SignedPauli pauli_mul(const SignedPauli& a, const SignedPauli& b) {
    if (a.pauli.n != b.pauli.n) throw std::invalid_argument("Pauli dimension mismatch");
    const Pauli& p = a.pauli;
    const Pauli& q = b.pauli;
    Pauli r{p.n, p.x ^ q.x, p.z ^ q.z};
    // Hermitian letters are i^{|x&z|} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
    int e = a.phase + b.phase + popcount(p.x & p.z) + popcount(q.x & q.z) + 2 * popcount(p.z & q.x) -
            popcount(r.x & r.z);
    return SignedPauli{((e % 4) + 4) % 4, r};
}

Pauli unsigned_product(const Pauli& a, const Pauli& b) {
    if (a.n != b.n) throw std::invalid_argument("Pauli dimension mismatch");
    return Pauli{a.n, a.x ^ b.x, a.z ^ b.z};
}

bool pauli_commutes(const Pauli& p, const Pauli& q) {
    if (p.n != q.n) throw std::invalid_argument("Pauli dimension mismatch");
    return (popcount((p.x & q.z) ^ (p.z & q.x)) & 1) == 0;
}

DenseMatrix pauli_matrix(const SignedPauli& sp) {
    const Pauli& p = sp.pauli;
    if (p.n > kDenseLimit) throw std::length_error("dense limit exceeded");
    const Eigen::Index dim = Eigen::Index{1} << p.n;
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    DenseMatrix m = DenseMatrix::Zero(dim, dim);
    int base = sp.phase + popcount(p.x & p.z);
    for (Eigen::Index b = 0; b < dim; ++b) {
        Bits bb = static_cast<Bits>(b);
        int e = base + 2 * popcount(p.z & bb);
        m(static_cast<Eigen::Index>(bb ^ p.x), b) = ipow[e & 3];
    }
    return m;
}

int qubits_of_dimension(Eigen::Index dim) {
    if (dim < 2 || (dim & (dim - 1)) != 0) throw std::invalid_argument("matrix dimension is not a power of two");
    return std::countr_zero(static_cast<std::uint64_t>(dim));
}

std::vector<std::complex<double>> pauli_traces(const DenseMatrix& u) {
    if (u.rows() != u.cols()) throw std::invalid_argument("non-square matrix");
    const int n = qubits_of_dimension(u.rows());
    if (n > kDenseLimit) throw std::length_error("dense limit exceeded");
    const std::size_t dim = std::size_t{1} << n;
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<std::complex<double>> out(dim * dim);
    std::vector<std::complex<double>> f(dim);
    const auto& k = simd::kernels();
    // Tr(U P_{x,z}) = i^{|x&z|} sum_b U[b][b^x] (-1)^{|z&b|}: one Walsh-Hadamard transform per x.
    for (Bits x = 0; x < dim; ++x) {
        for (Bits b = 0; b < dim; ++b) f[b] = u(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ x));
        k.fwht_complex(reinterpret_cast<double*>(f.data()), dim);
        for (Bits z = 0; z < dim; ++z) {
            Pauli p{n, x, z};
            out[p.index()] = ipow[popcount(x & z) & 3] * f[z];
        }
    }
    return out;
}

std::vector<std::complex<double>> pauli_coefficients(const DenseMatrix& u) {
    auto t = pauli_traces(u);
    const double inv = 1.0 / static_cast<double>(u.rows());
    for (auto& c : t) c *= inv;
    return t;
}

}  // namespace tof
