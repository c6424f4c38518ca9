#include "tof/genset.hpp"

#include <algorithm>
#include <stdexcept>

namespace tof {

std::array<Pauli, 7> GenTriple::subgroup() const {
    std::array<Pauli, 7> v{p1,
                           p2,
                           p3,
                           unsigned_product(p1, p2),
                           unsigned_product(p2, p3),
                           unsigned_product(p3, p1),
                           unsigned_product(unsigned_product(p1, p2), p3)};
    std::sort(v.begin(), v.end());
    return v;
}

std::string GenTriple::str() const { return "(" + p1.str() + ", " + p2.str() + ", " + p3.str() + ")"; }

bool operator<(const GenTriple& a, const GenTriple& b) {
    auto key = [](const GenTriple& t) { return std::array<PauliIndex, 3>{t.p1.index(), t.p2.index(), t.p3.index()}; };
    return key(a) < key(b);
}

void validate_triple(const Pauli& p1, const Pauli& p2, const Pauli& p3) {
    if (p1.n != p2.n || p2.n != p3.n) throw std::invalid_argument("Pauli dimension mismatch");
    if (p1.is_identity() || p2.is_identity() || p3.is_identity())
        throw std::invalid_argument("degenerate triple: identity element");
    if (p1 == p2 || p2 == p3 || p1 == p3) throw std::invalid_argument("degenerate triple: repeated element");
    if (!pauli_commutes(p1, p2) || !pauli_commutes(p2, p3) || !pauli_commutes(p3, p1))
        throw std::invalid_argument("degenerate triple: elements do not commute");
    if (p3 == unsigned_product(p1, p2)) throw std::invalid_argument("degenerate triple: rank 2");
}

GenTriple canonical_triple(const Pauli& p1, const Pauli& p2, const Pauli& p3) {
    validate_triple(p1, p2, p3);
    auto v = GenTriple{p1, p2, p3}.subgroup();
    // Smallest ordered independent triple: v0, v1, then the smallest element outside span{v0, v1}.
    Pauli third = v[2] == unsigned_product(v[0], v[1]) ? v[3] : v[2];
    return GenTriple{v[0], v[1], third};
}

const char* mode_name(GenSetMode m) { return m == GenSetMode::canonical ? "canonical" : "paper-compat"; }

GenSetMode parse_mode(const std::string& s) {
    if (s == "canonical") return GenSetMode::canonical;
    if (s == "paper-compat" || s == "paper_compat" || s == "compat") return GenSetMode::paper_compat;
    throw std::invalid_argument("unknown generating-set mode '" + s + "'");
}

namespace {

std::vector<Pauli> non_identity_paulis(int n) {
    std::vector<Pauli> ps;
    const PauliIndex count = PauliIndex{1} << (2 * n);
    ps.reserve(count - 1);
    for (PauliIndex i = 1; i < count; ++i) ps.push_back(Pauli::from_index(n, i));
    return ps;
}

std::vector<GenTriple> enumerate_canonical(int n) {
    const auto ps = non_identity_paulis(n);
    std::vector<GenTriple> out;
    const std::size_t m = ps.size();
    // A triple is kept iff it is already the canonical form of its subgroup;
    // the loop order then yields the list sorted lexicographically.
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            if (!pauli_commutes(ps[a], ps[b])) continue;
            const Pauli ab = unsigned_product(ps[a], ps[b]);
            if (ab.index() < ps[a].index()) continue;
            for (std::size_t c = b + 1; c < m; ++c) {
                const Pauli& p3 = ps[c];
                if (p3 == ab || !pauli_commutes(ps[a], p3) || !pauli_commutes(ps[b], p3)) continue;
                GenTriple t{ps[a], ps[b], p3};
                if (canonical_triple(t) == t) out.push_back(t);
            }
        }
    }
    return out;
}

// Literal pairwise merge rule of the compatibility mode. A new triple is
// dropped if some stored triple sharing an element satisfies the check.
std::vector<GenTriple> enumerate_paper_compat(int n) {
    const auto ps = non_identity_paulis(n);
    const std::size_t m = ps.size();
    std::vector<std::array<PauliIndex, 3>> stored;
    std::vector<std::vector<std::uint32_t>> by_element(m + 1);  // indexed by code
    std::vector<std::uint32_t> cands;

    auto contains = [](PauliIndex v, PauliIndex a, PauliIndex b) { return v == a || v == b; };
    // Symplectic codes (x << n | z): unsigned products are XORs.
    auto code = [n](const Pauli& p) { return (PauliIndex{p.x} << n) | p.z; };
    auto prod = [](PauliIndex a, PauliIndex b) { return a ^ b; };
    auto decode = [n](PauliIndex c) { return Pauli{n, c >> n, c & ((Bits{1} << n) - 1)}; };

    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            if (!pauli_commutes(ps[a], ps[b])) continue;
            const Pauli ab = unsigned_product(ps[a], ps[b]);
            for (std::size_t c = b + 1; c < m; ++c) {
                const Pauli& p3 = ps[c];
                if (!pauli_commutes(ps[b], p3) || !pauli_commutes(p3, ps[a])) continue;
                if (ab == p3) continue;
                const std::array<PauliIndex, 3> rp{code(ps[a]), code(ps[b]), code(p3)};
                cands.clear();
                for (PauliIndex e : rp) cands.insert(cands.end(), by_element[e].begin(), by_element[e].end());
                bool keep = true;
                for (std::uint32_t gi : cands) {
                    const auto& r = stored[gi];
                    const PauliIndex p12 = prod(r[0], r[1]), p23 = prod(r[1], r[2]), p31 = prod(r[2], r[0]);
                    const PauliIndex p123 = prod(p12, r[2]);
                    std::array<PauliIndex, 3> q{0, 0, 0}, qp{0, 0, 0};
                    std::vector<int> i1{0, 1, 2}, i2{0, 1, 2};
                    for (int j = 0; j < 3; ++j) {
                        for (int k = 0; k < 3; ++k) {
                            if (r[j] == rp[k]) {
                                q[j] = rp[k];
                                qp[j] = rp[k];
                                std::erase(i1, j);
                                std::erase(i2, k);
                            }
                        }
                    }
                    const std::size_t l = i1.size();
                    if (l == 2) {
                        q[i1[0]] = rp[i2[0]];
                        q[i1[1]] = rp[i2[1]];
                        qp[i1[1]] = rp[i2[0]];
                        qp[i1[0]] = rp[i2[1]];
                    } else if (l == 1) {
                        q[i1[0]] = rp[i2[0]];
                    }
                    bool merge = contains(p12, q[0], q[1]) || contains(p23, q[1], q[2]) || contains(p31, q[2], q[0]);
                    if (!merge && l == 1) merge = p123 == q[0] || p123 == q[1] || p123 == q[2];
                    if (!merge && l == 2)
                        merge = contains(p12, qp[0], qp[1]) || contains(p23, qp[1], qp[2]) || contains(p31, qp[2], qp[0]);
                    if (merge) {
                        keep = false;
                        break;
                    }
                }
                if (keep) {
                    const auto id = static_cast<std::uint32_t>(stored.size());
                    stored.push_back(rp);
                    for (PauliIndex e : rp) by_element[e].push_back(id);
                }
            }
        }
    }
    std::vector<GenTriple> out;
    out.reserve(stored.size());
    for (const auto& r : stored)
        out.push_back({decode(r[0]), decode(r[1]), decode(r[2])});
    return out;
}

}  // namespace

GenSet generate_gen_set(int n, GenSetMode mode) {
    GenSet g;
    g.n = n;
    g.mode = mode;
    if (n < 3) {
        g.diagnostic = "no generators for n<3";
        return g;
    }
    if (n > 6) throw std::length_error("generating set enumeration limited to n <= 6");
    g.triples = mode == GenSetMode::canonical ? enumerate_canonical(n) : enumerate_paper_compat(n);
    return g;
}

DenseMatrix gen_element_unitary(const GenTriple& t) {
    validate_triple(t.p1, t.p2, t.p3);
    const int n = t.n();
    if (n > kDenseLimit) throw std::length_error("dense limit exceeded");
    const Eigen::Index dim = Eigen::Index{1} << n;
    const SignedPauli a{0, t.p1}, b{0, t.p2}, c{0, t.p3};
    DenseMatrix g = 3.0 * DenseMatrix::Identity(dim, dim);
    g += pauli_matrix(a) + pauli_matrix(b) + pauli_matrix(c);
    g -= pauli_matrix(pauli_mul(a, b)) + pauli_matrix(pauli_mul(b, c)) + pauli_matrix(pauli_mul(c, a));
    g += pauli_matrix(pauli_mul(pauli_mul(a, b), c));
    return g * 0.25;
}

Circuit gen_element_circuit(const GenTriple& t) {
    validate_triple(t.p1, t.p2, t.p3);
    const TripleMapping m = clifford_mapping_triple(t.p1, t.p2, t.p3);
    Circuit out = m.conjugator.inverse();
    out.add(gate_tof(m.a, m.b, m.c));
    out.append(m.conjugator);
    return out;
}

}  // namespace tof

namespace tof {

Circuit decomposition_circuit(const std::vector<GenTriple>& word, const Circuit& trailing) {
    Circuit out = trailing;
    for (auto it = word.rbegin(); it != word.rend(); ++it) out.append(gen_element_circuit(*it));
    return out;
}

}  // namespace tof
