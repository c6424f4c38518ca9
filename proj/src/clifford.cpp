#include "tof/clifford.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tof/channel.hpp"
#include "tof/genset.hpp"

namespace tof {
namespace {

Bits bit_of(int n, int q) { return Bits{1} << (n - q); }

bool has(Bits v, Bits b) { return (v & b) != 0; }

void flip_sign(SignedPauli& p) { p.phase = (p.phase + 2) & 3; }

void check_qubit(int n, int q) {
    if (q < 1 || q > n) throw std::invalid_argument("gate operand " + std::to_string(q) + " outside 1.." + std::to_string(n));
}

}  // namespace

int Gate::arity() const {
    switch (kind) {
        case GateKind::CNOT:
        case GateKind::SWAP: return 2;
        case GateKind::TOF: return 3;
        default: return 1;
    }
}

std::string Gate::str() const {
    static const char* names[] = {"H", "S", "Sdg", "X", "Z", "CNOT", "SWAP", "TOF"};
    std::string s = names[static_cast<int>(kind)];
    for (int i = 0; i < arity(); ++i) s += " " + std::to_string(q[i]);
    return s;
}

Gate gate_h(int q) { return {GateKind::H, {q, 0, 0}}; }
Gate gate_s(int q) { return {GateKind::S, {q, 0, 0}}; }
Gate gate_sdg(int q) { return {GateKind::Sdg, {q, 0, 0}}; }
Gate gate_x(int q) { return {GateKind::X, {q, 0, 0}}; }
Gate gate_z(int q) { return {GateKind::Z, {q, 0, 0}}; }
Gate gate_cnot(int c, int t) { return {GateKind::CNOT, {c, t, 0}}; }
Gate gate_swap(int a, int b) { return {GateKind::SWAP, {a, b, 0}}; }
Gate gate_tof(int a, int b, int c) { return {GateKind::TOF, {a, b, c}}; }

void Circuit::add(const Gate& g) {
    for (int i = 0; i < g.arity(); ++i) {
        check_qubit(n, g.q[i]);
        for (int j = 0; j < i; ++j)
            if (g.q[i] == g.q[j]) throw std::invalid_argument("repeated operand in " + g.str());
    }
    gates.push_back(g);
}

void Circuit::append(const Circuit& other) {
    if (other.n != n) throw std::invalid_argument("circuit width mismatch");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

std::size_t Circuit::toffoli_count() const {
    std::size_t c = 0;
    for (const auto& g : gates) c += g.kind == GateKind::TOF;
    return c;
}

Circuit Circuit::inverse() const {
    Circuit r(n);
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::S) g.kind = GateKind::Sdg;
        else if (g.kind == GateKind::Sdg) g.kind = GateKind::S;
        r.gates.push_back(g);
    }
    if (global_phase) r.global_phase = -*global_phase;
    return r;
}

std::string Circuit::str() const {
    std::ostringstream os;
    os << "# qubits " << n << "\n";
    if (global_phase) os << "# global_phase " << *global_phase << "\n";
    for (const auto& g : gates) os << g.str() << "\n";
    return os.str();
}

Circuit Circuit::parse(std::string_view text, int n) {
    struct Parsed {
        Gate g;
        int line;
    };
    std::vector<Parsed> parsed;
    int declared = 0, widest = 0, lineno = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            std::istringstream cs(line.substr(hash + 1));
            std::string key;
            cs >> key;
            if (key == "qubits") cs >> declared;
            line = line.substr(0, hash);
        }
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> name)) continue;
        Gate g;
        if (name == "H" || name == "h") g.kind = GateKind::H;
        else if (name == "S" || name == "s") g.kind = GateKind::S;
        else if (name == "Sdg" || name == "sdg" || name == "SDG") g.kind = GateKind::Sdg;
        else if (name == "X" || name == "x") g.kind = GateKind::X;
        else if (name == "Z" || name == "z") g.kind = GateKind::Z;
        else if (name == "CNOT" || name == "cnot" || name == "CX" || name == "cx") g.kind = GateKind::CNOT;
        else if (name == "SWAP" || name == "swap") g.kind = GateKind::SWAP;
        else if (name == "TOF" || name == "tof" || name == "CCX" || name == "ccx") g.kind = GateKind::TOF;
        else throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown gate '" + name + "'");
        for (int i = 0; i < g.arity(); ++i) {
            if (!(ls >> g.q[i]) || g.q[i] < 1)
                throw std::invalid_argument("line " + std::to_string(lineno) + ": bad operand for " + name);
            widest = std::max(widest, g.q[i]);
        }
        std::string extra;
        if (ls >> extra) throw std::invalid_argument("line " + std::to_string(lineno) + ": trailing token '" + extra + "'");
        parsed.push_back({g, lineno});
    }
    Circuit c(n ? n : (declared ? declared : widest));
    if (c.n < 1) throw std::invalid_argument("cannot determine circuit width");
    for (const auto& p : parsed) {
        try {
            c.add(p.g);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(p.line) + ": " + e.what());
        }
    }
    return c;
}

SignedPauli conjugate_gate(const Gate& g, SignedPauli p) {
    const int n = p.pauli.n;
    Bits& x = p.pauli.x;
    Bits& z = p.pauli.z;
    const Bits a = bit_of(n, g.q[0]);
    switch (g.kind) {
        case GateKind::H: {
            bool xa = has(x, a), za = has(z, a);
            if (xa && za) flip_sign(p);
            x = (x & ~a) | (za ? a : 0);
            z = (z & ~a) | (xa ? a : 0);
            break;
        }
        case GateKind::S:
            if (has(x, a)) {
                if (has(z, a)) flip_sign(p);
                z ^= a;
            }
            break;
        case GateKind::Sdg:
            if (has(x, a)) {
                if (!has(z, a)) flip_sign(p);
                z ^= a;
            }
            break;
        case GateKind::X:
            if (has(z, a)) flip_sign(p);
            break;
        case GateKind::Z:
            if (has(x, a)) flip_sign(p);
            break;
        case GateKind::CNOT: {
            const Bits t = bit_of(n, g.q[1]);
            bool xc = has(x, a), zc = has(z, a), xt = has(x, t), zt = has(z, t);
            if (xc && zt && (xt == zc)) flip_sign(p);
            if (xc) x ^= t;
            if (zt) z ^= a;
            break;
        }
        case GateKind::SWAP: {
            const Bits b = bit_of(n, g.q[1]);
            auto swap_bits = [&](Bits& v) {
                bool va = has(v, a), vb = has(v, b);
                v = (v & ~(a | b)) | (va ? b : 0) | (vb ? a : 0);
            };
            swap_bits(x);
            swap_bits(z);
            break;
        }
        case GateKind::TOF: throw std::invalid_argument("TOF is not a Clifford gate");
    }
    return p;
}

SignedPauli conjugate_pauli(const Circuit& c, const SignedPauli& p) {
    if (p.pauli.n != c.n) throw std::invalid_argument("Pauli/circuit width mismatch");
    SignedPauli r = p;
    for (const auto& g : c.gates) r = conjugate_gate(g, r);
    return r;
}

Tableau Tableau::identity(int n) {
    Tableau t;
    t.n = n;
    for (int q = 1; q <= n; ++q) {
        t.x_images.push_back({0, Pauli::single(n, q, 'X')});
        t.z_images.push_back({0, Pauli::single(n, q, 'Z')});
    }
    return t;
}

Tableau Tableau::from_circuit(const Circuit& c) {
    Tableau t = identity(c.n);
    for (auto& p : t.x_images) p = conjugate_pauli(c, p);
    for (auto& p : t.z_images) p = conjugate_pauli(c, p);
    return t;
}

SignedPauli Tableau::apply(const SignedPauli& p) const {
    if (p.pauli.n != n) throw std::invalid_argument("Pauli/tableau width mismatch");
    // Hermitian P = i^{|x&z|} prod X^x prod Z^z.
    SignedPauli r{(p.phase + std::popcount(p.pauli.x & p.pauli.z)) & 3, Pauli::identity(n)};
    for (int q = 1; q <= n; ++q)
        if (has(p.pauli.x, bit_of(n, q))) r = pauli_mul(r, x_images[q - 1]);
    for (int q = 1; q <= n; ++q)
        if (has(p.pauli.z, bit_of(n, q))) r = pauli_mul(r, z_images[q - 1]);
    return r;
}

bool Tableau::is_symplectic() const {
    if (static_cast<int>(x_images.size()) != n || static_cast<int>(z_images.size()) != n) return false;
    for (int i = 0; i < n; ++i) {
        if (!x_images[i].hermitian() || !z_images[i].hermitian()) return false;
        for (int j = 0; j < n; ++j) {
            if (!pauli_commutes(x_images[i].pauli, x_images[j].pauli)) return false;
            if (!pauli_commutes(z_images[i].pauli, z_images[j].pauli)) return false;
            if (pauli_commutes(x_images[i].pauli, z_images[j].pauli) != (i != j)) return false;
        }
    }
    return true;
}

Circuit Tableau::to_circuit() const {
    if (!is_symplectic()) throw std::invalid_argument("tableau is not symplectic");
    // Reduce the images to +X_i, +Z_i with gates applied after the Clifford,
    // then invert the reducing circuit.
    Circuit d(n);
    std::vector<SignedPauli> xs = x_images, zs = z_images;
    auto push = [&](const Gate& g) {
        d.add(g);
        for (auto& p : xs) p = conjugate_gate(g, p);
        for (auto& p : zs) p = conjugate_gate(g, p);
    };
    for (int i = 1; i <= n; ++i) {
        const Bits bi = bit_of(n, i);
        {
            const Pauli& a = xs[i - 1].pauli;
            for (int k = i; k <= n; ++k) {
                Bits bk = bit_of(n, k);
                bool xk = has(a.x, bk), zk = has(a.z, bk);
                if (zk && !xk) push(gate_h(k));
                else if (zk && xk) push(gate_s(k));
            }
        }
        int first = 0;
        for (int k = i; k <= n && !first; ++k)
            if (has(xs[i - 1].pauli.x, bit_of(n, k))) first = k;
        if (!first) throw std::logic_error("tableau reduction lost its pivot");
        if (first != i) push(gate_swap(i, first));
        for (int k = i + 1; k <= n; ++k)
            if (has(xs[i - 1].pauli.x, bit_of(n, k))) push(gate_cnot(i, k));

        if (has(zs[i - 1].pauli.x, bi)) {
            push(gate_h(i));
            push(gate_s(i));
            push(gate_h(i));
        }
        {
            const Pauli& b = zs[i - 1].pauli;
            for (int k = i + 1; k <= n; ++k) {
                Bits bk = bit_of(n, k);
                bool xk = has(b.x, bk), zk = has(b.z, bk);
                if (xk && !zk) push(gate_h(k));
                else if (xk && zk) {
                    push(gate_sdg(k));
                    push(gate_h(k));
                }
            }
        }
        for (int k = i + 1; k <= n; ++k)
            if (has(zs[i - 1].pauli.z, bit_of(n, k))) push(gate_cnot(k, i));
    }
    for (int i = 1; i <= n; ++i) {
        if (xs[i - 1].negative()) push(gate_z(i));
        if (zs[i - 1].negative()) push(gate_x(i));
    }
    for (int i = 1; i <= n; ++i) {
        if (!(xs[i - 1] == SignedPauli{0, Pauli::single(n, i, 'X')}) ||
            !(zs[i - 1] == SignedPauli{0, Pauli::single(n, i, 'Z')}))
            throw std::logic_error("tableau reduction did not reach the identity");
    }
    return d.inverse();
}

TripleMapping clifford_mapping_triple(const Pauli& t1, const Pauli& t2, const Pauli& t3) {
    const int n = t1.n;
    if (t2.n != n || t3.n != n) throw std::invalid_argument("Pauli dimension mismatch");
    if (t1.is_identity() || t2.is_identity() || t3.is_identity()) throw std::invalid_argument("identity target");
    if (!pauli_commutes(t1, t2) || !pauli_commutes(t2, t3) || !pauli_commutes(t1, t3))
        throw std::invalid_argument("targets do not commute");
    if (t1 == t2 || t3 == t1 || t3 == t2 || t3 == unsigned_product(t1, t2))
        throw std::invalid_argument("targets are dependent");

    Circuit d(n);
    SignedPauli cur[3] = {{0, t1}, {0, t2}, {0, t3}};
    auto push = [&](const Gate& g) {
        d.add(g);
        for (auto& p : cur) p = conjugate_gate(g, p);
    };
    // Turn every letter of cur[idx] outside the pivots into Z (or X).
    auto localize = [&](int idx, Bits pivots, bool to_x) {
        const Pauli p = cur[idx].pauli;
        for (int q = 1; q <= n; ++q) {
            Bits b = bit_of(n, q);
            if (pivots & b) continue;
            bool xq = has(p.x, b), zq = has(p.z, b);
            if (!to_x) {
                if (xq && !zq) push(gate_h(q));
                else if (xq && zq) {
                    push(gate_sdg(q));
                    push(gate_h(q));
                }
            } else {
                if (zq && !xq) push(gate_h(q));
                else if (xq && zq) push(gate_s(q));
            }
        }
    };
    auto first_outside = [&](const Pauli& p, Bits pivots) {
        for (int q = 1; q <= n; ++q) {
            Bits b = bit_of(n, q);
            if (!(pivots & b) && ((p.x | p.z) & b)) return q;
        }
        throw std::logic_error("targets are dependent");
    };

    Bits pivots = 0;
    int roles[2] = {0, 0};
    for (int idx = 0; idx < 2; ++idx) {
        localize(idx, pivots, false);
        int q = first_outside(cur[idx].pauli, pivots);
        for (int k = 1; k <= n; ++k)
            if (k != q && has(cur[idx].pauli.z, bit_of(n, k))) push(gate_cnot(k, q));
        roles[idx] = q;
        pivots |= bit_of(n, q);
    }
    localize(2, pivots, true);
    int c = first_outside(cur[2].pauli, pivots);
    for (int k = 1; k <= n; ++k)
        if (k != c && !(pivots & bit_of(n, k)) && has(cur[2].pauli.x, bit_of(n, k))) push(gate_cnot(c, k));
    for (int j = 0; j < 2; ++j) {
        if (has(cur[2].pauli.z, bit_of(n, roles[j]))) {
            push(gate_h(c));
            push(gate_cnot(roles[j], c));
            push(gate_h(c));
        }
    }
    if (cur[0].negative()) push(gate_x(roles[0]));
    if (cur[1].negative()) push(gate_x(roles[1]));
    if (cur[2].negative()) push(gate_z(c));

    if (!(cur[0] == SignedPauli{0, Pauli::single(n, roles[0], 'Z')}) ||
        !(cur[1] == SignedPauli{0, Pauli::single(n, roles[1], 'Z')}) ||
        !(cur[2] == SignedPauli{0, Pauli::single(n, c, 'X')}))
        throw std::logic_error("triple mapping failed to localize");
    return TripleMapping{d.inverse(), roles[0], roles[1], c};
}

Circuit clifford_from_channel(const ChannelMatrix& m) {
    const int n = m.qubits();
    const std::size_t dim = m.dim();
    if (m.exponent() != 0) throw std::invalid_argument("not a Clifford channel");
    // image[s] = sign * P_r where column s has its single nonzero in row r.
    std::vector<SignedPauli> image(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        int found = 0;
        for (std::size_t r = 0; r < dim; ++r) {
            std::int64_t v = m.numerator(r, s);
            if (v == 0) continue;
            if ((v != 1 && v != -1) || found++) throw std::invalid_argument("not a Clifford channel");
            image[s] = SignedPauli{v < 0 ? 2 : 0, Pauli::from_index(n, r)};
        }
        if (!found) throw std::invalid_argument("not a Clifford channel");
    }
    Tableau t;
    t.n = n;
    for (int q = 1; q <= n; ++q) {
        t.x_images.push_back(image[Pauli::single(n, q, 'X').index()]);
        t.z_images.push_back(image[Pauli::single(n, q, 'Z').index()]);
    }
    if (!t.is_symplectic()) throw std::invalid_argument("not a Clifford channel");
    for (std::size_t s = 0; s < dim; ++s) {
        if (!(t.apply(SignedPauli{0, Pauli::from_index(n, s)}) == image[s]))
            throw std::invalid_argument("not a Clifford channel");
    }
    return t.to_circuit();
}

void apply_gate(const Gate& g, int n, DenseMatrix& m) {
    const Eigen::Index dim = m.rows();
    auto bit = [&](int q) { return Eigen::Index{1} << (n - q); };
    const Eigen::Index a = bit(g.q[0]);
    const std::complex<double> I(0, 1);
    switch (g.kind) {
        case GateKind::H: {
            const double s = 1.0 / std::sqrt(2.0);
            for (Eigen::Index b = 0; b < dim; ++b) {
                if (b & a) continue;
                Eigen::RowVectorXcd r0 = m.row(b), r1 = m.row(b | a);
                m.row(b) = (r0 + r1) * s;
                m.row(b | a) = (r0 - r1) * s;
            }
            break;
        }
        case GateKind::S:
        case GateKind::Sdg:
        case GateKind::Z: {
            std::complex<double> f = g.kind == GateKind::S ? I : (g.kind == GateKind::Sdg ? -I : -1.0);
            for (Eigen::Index b = 0; b < dim; ++b)
                if (b & a) m.row(b) *= f;
            break;
        }
        case GateKind::X:
            for (Eigen::Index b = 0; b < dim; ++b)
                if (!(b & a)) m.row(b).swap(m.row(b | a));
            break;
        case GateKind::CNOT: {
            const Eigen::Index t = bit(g.q[1]);
            for (Eigen::Index b = 0; b < dim; ++b)
                if ((b & a) && !(b & t)) m.row(b).swap(m.row(b | t));
            break;
        }
        case GateKind::SWAP: {
            const Eigen::Index t = bit(g.q[1]);
            for (Eigen::Index b = 0; b < dim; ++b)
                if ((b & a) && !(b & t)) m.row(b).swap(m.row((b & ~a) | t));
            break;
        }
        case GateKind::TOF: {
            const Eigen::Index c2 = bit(g.q[1]), t = bit(g.q[2]);
            for (Eigen::Index b = 0; b < dim; ++b)
                if ((b & a) && (b & c2) && !(b & t)) m.row(b).swap(m.row(b | t));
            break;
        }
    }
}

DenseMatrix circuit_to_unitary(const Circuit& c) {
    if (c.n > kDenseLimit) throw std::length_error("dense limit exceeded");
    const Eigen::Index dim = Eigen::Index{1} << c.n;
    DenseMatrix m = DenseMatrix::Identity(dim, dim);
    for (const auto& g : c.gates) apply_gate(g, c.n, m);
    if (c.global_phase) m *= std::polar(1.0, *c.global_phase);
    return m;
}

double global_phase_distance(const DenseMatrix& u, const DenseMatrix& w) {
    if (u.rows() != w.rows() || u.cols() != w.cols()) throw std::invalid_argument("dimension mismatch");
    // For unitaries 1 - |Tr(U^dagger W)|/N = |U e^{i phi} - W|_F^2 / 2N at the best phase. The
    // Frobenius form avoids the cancellation in 1 - t, which would floor the distance near 1e-8.
    const std::complex<double> tr = (u.adjoint() * w).trace();
    if (std::abs(tr) == 0.0) return 1.0;
    const double f = (u * (tr / std::abs(tr)) - w).norm();
    return std::min(1.0, f / std::sqrt(2.0 * static_cast<double>(u.rows())));
}

VerificationReport verify_decomposition(const DenseMatrix& target, const std::vector<GenTriple>& word,
                                        const Circuit& trailing, double threshold) {
    VerificationReport rep;
    rep.mode = "dense";
    const Eigen::Index dim = Eigen::Index{1} << trailing.n;
    if (target.rows() != dim || target.cols() != dim) {
        rep.detail = "dimension mismatch";
        return rep;
    }
    DenseMatrix v = DenseMatrix::Identity(dim, dim);
    for (const auto& t : word) {
        if (t.n() != trailing.n) {
            rep.detail = "generator width mismatch";
            return rep;
        }
        v = v * gen_element_unitary(t);
    }
    v = v * circuit_to_unitary(trailing);
    rep.distance = global_phase_distance(v, target);
    rep.pass = rep.distance <= threshold;
    rep.detail = rep.pass ? "distance within threshold" : "distance above threshold";
    return rep;
}

VerificationReport verify_decomposition(const ChannelMatrix& target, const std::vector<GenTriple>& word,
                                        const Circuit& trailing) {
    if (!trailing.is_clifford()) {
        VerificationReport rep;
        rep.mode = "exact";
        rep.distance = 1.0;
        rep.detail = "trailing circuit is not Clifford";
        return rep;
    }
    return verify_decomposition(target, word, channel_of_clifford(trailing));
}

VerificationReport verify_decomposition(const ChannelMatrix& target, const std::vector<GenTriple>& word,
                                        const ChannelMatrix& trailing) {
    VerificationReport rep;
    rep.mode = "exact";
    if (target.qubits() != trailing.qubits()) {
        rep.detail = "dimension mismatch";
        rep.distance = 1.0;
        return rep;
    }
    ChannelMatrix m = trailing;
    for (auto it = word.rbegin(); it != word.rend(); ++it) m = mult_generator(chan_rep_generator(*it), m);
    rep.pass = m == target;
    rep.distance = rep.pass ? 0.0 : 1.0;
    rep.detail = rep.pass ? "channel matrices equal" : "channel matrices differ";
    return rep;
}

}  // namespace tof
