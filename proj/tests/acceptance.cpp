// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "tof/approx_synth.hpp"
#include "tof/bounds.hpp"
#include "tof/exact_synth.hpp"
#include "tof/io.hpp"

using namespace tof;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const GenSet& gens3() {
    static const GenSet g = generate_gen_set(3);
    return g;
}

const GeneratorTable& table3() {
    static const GeneratorTable t(gens3());
    return t;
}

struct Verdict {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note << " [failed: " << what << "]";
        }
    }
};

// Runtime ceilings recorded by criteria 1 and 4 for criterion 12.
struct Timings {
    double n3 = -1, n4 = -1, cs = -1;
} timings;

DenseMatrix diag_phase(const std::vector<int>& idx) {
    DenseMatrix u = DenseMatrix::Identity(8, 8);
    for (int i : idx) u(i, i) = {0, 1};
    return u;
}

ChannelMatrix exact_channel(const DenseMatrix& u) { return snap_to_dyadic(chan_rep_unitary(u)); }

GenTriple triple(const char* a, const char* b, const char* c) { return {Pauli::parse(a), Pauli::parse(b), Pauli::parse(c)}; }

ChannelMatrix word_channel(const std::vector<GenTriple>& w) {
    ChannelMatrix m = ChannelMatrix::identity(3);
    for (const auto& t : w) m = multiply(m, chan_rep_generator(t).expand());
    return m;
}

DenseMatrix t_on_first() {
    DenseMatrix u = DenseMatrix::Identity(8, 8);
    for (int i = 4; i < 8; ++i) u(i, i) = std::polar(1.0, M_PI / 4);
    return u;
}

// exp(-i t H) for a random Hermitian H, scaled so that d(E, I) equals target.
DenseMatrix near_identity(double target, Rng& rng) {
    DenseMatrix a(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) a(r, c) = {uniform_unit(rng) - 0.5, uniform_unit(rng) - 0.5};
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es((a + a.adjoint()) / 2.0);
    auto make = [&](double t) {
        Eigen::VectorXcd ph(8);
        for (int i = 0; i < 8; ++i) ph(i) = std::polar(1.0, -t * es.eigenvalues()(i));
        return DenseMatrix(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
    };
    const DenseMatrix id = DenseMatrix::Identity(8, 8);
    double lo = 0, hi = 1;
    while (global_phase_distance(make(hi), id) < target) hi *= 2;
    for (int i = 0; i < 100; ++i) {
        const double mid = (lo + hi) / 2;
        (global_phase_distance(make(mid), id) < target ? lo : hi) = mid;
    }
    return make(lo);
}

int run_cli(const std::string& args, std::string& out) {
    const std::string cmd = std::string(TOFSYN_PATH) + " -q --cache-dir '' " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    out.clear();
    while (std::size_t k = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), k);
    return WEXITSTATUS(pclose(p));
}

Verdict criterion1() {
    Verdict v;
    auto t0 = Clock::now();
    const std::size_t pc3 = generate_gen_set(3, GenSetMode::paper_compat).size();
    timings.n3 = seconds_since(t0);
    t0 = Clock::now();
    const std::size_t pc4 = generate_gen_set(4, GenSetMode::paper_compat).size();
    timings.n4 = seconds_since(t0);
    t0 = Clock::now();
    const GenSet c3 = generate_gen_set(3);
    timings.n3 = std::max(timings.n3, seconds_since(t0));
    t0 = Clock::now();
    const GenSet c4 = generate_gen_set(4);
    timings.n4 = std::max(timings.n4, seconds_since(t0));
    v.note << "paper-compat " << pc3 << "/" << pc4 << ", canonical " << c3.size() << "/" << c4.size();
    v.require(pc3 == 129, "paper-compat n=3 expected 129");
    v.require(pc4 == 7024, "paper-compat n=4 expected 7024");
    v.require(c3.size() == 135 && c4.size() == 11475, "canonical closed form");
    for (const GenSet* g : {&c3, &c4}) {
        const auto brute = oracle::isotropic_subspaces(g->n);
        std::set<std::vector<std::uint64_t>> mine;
        for (const auto& t : g->triples) {
            std::vector<std::uint64_t> s;
            for (const auto& p : t.subgroup()) s.push_back((p.x << g->n) | p.z);
            std::sort(s.begin(), s.end());
            mine.insert(s);
        }
        v.require(mine == brute && mine.size() == g->size(), "canonical set differs from brute-force subspaces");
    }
    v.note << "; brute-force subspaces match; time n=3 " << timings.n3 << " s, n=4 " << timings.n4 << " s";
    v.require(timings.n3 < 5, "n=3 over 5 s");
    v.require(timings.n4 < 600, "n=4 over 10 min");
    return v;
}

Verdict criterion2() {
    Verdict v;
    std::size_t checked = 0;
    const oracle::Rat half(1, 2);
    const auto identity = oracle::to_rational(ChannelMatrix::identity(3));
    for (GenSetMode mode : {GenSetMode::canonical, GenSetMode::paper_compat}) {
        for (const auto& t : generate_gen_set(3, mode).triples) {
            const ChannelMatrix g = chan_rep_generator(t).expand();
            const auto m = oracle::to_rational(g);
            int ones = 0;
            bool ok = true;
            for (std::size_t r = 0; r < 64; ++r) {
                if (m[r][r] != 1 && m[r][r] != half) ok = false;
                int off = 0;
                for (std::size_t c = 0; c < 64; ++c) {
                    if (c == r || m[r][c] == 0) continue;
                    ++off;
                    if (m[r][c] != half && m[r][c] != -half) ok = false;
                }
                if (m[r][r] == 1) {
                    ++ones;
                    if (off != 0) ok = false;
                    for (std::size_t c = 0; c < 64; ++c)
                        if (c != r && m[c][r] != 0) ok = false;
                } else if (off != 3) {
                    ok = false;
                }
            }
            ok = ok && ones == 8;
            ok = ok && oracle::multiply(m, m) == identity;
            auto mt = m;
            for (std::size_t r = 0; r < 64; ++r)
                for (std::size_t c = 0; c < 64; ++c) mt[r][c] = m[c][r];
            ok = ok && oracle::multiply(m, mt) == identity;
            v.require(ok, t.str());
            ++checked;
        }
    }
    v.note << checked << " generators (canonical and paper-compat), exact rational checks";
    return v;
}

Verdict criterion3() {
    Verdict v;
    Rng rng(3003);
    std::vector<std::size_t> gs;
    std::vector<ChannelMatrix> ms, dense_gs;
    for (int i = 0; i < 200; ++i) {
        gs.push_back(uniform_below(rng, gens3().size()));
        ms.push_back(random_chan_rep(gens3(), uniform_below(rng, 5), 9000 + i).matrix);
        dense_gs.push_back(table3().rows(gs.back()).expand());
    }
    std::size_t equal = 0;
    for (int i = 0; i < 200; ++i) {
        const ChannelMatrix s = mult_generator(table3().rows(gs[i]), ms[i]);
        const ChannelMatrix d = multiply(dense_gs[i], ms[i]);
        if (s == d && oracle::to_rational(s) == oracle::multiply(oracle::to_rational(dense_gs[i]), oracle::to_rational(ms[i])))
            ++equal;
    }
    v.require(equal == 200, "structured product differs");
    const int reps = 5;
    std::size_t sink = 0;
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r)
        for (int i = 0; i < 200; ++i) sink += mult_generator(table3().rows(gs[i]), ms[i]).exponent();
    const double structured = seconds_since(t0);
    t0 = Clock::now();
    for (int r = 0; r < reps; ++r)
        for (int i = 0; i < 200; ++i) sink += multiply(dense_gs[i], ms[i]).exponent();
    const double dense = seconds_since(t0);
    const double speedup = dense / structured;
    v.note << equal << "/200 equal to dense and rational products; speedup " << speedup << "x (checksum " << sink % 7
           << ")";
    v.require(speedup >= 5, "speedup below 5x");
    return v;
}

Verdict criterion4() {
    Verdict v;
    const auto t0 = Clock::now();
    const ChannelMatrix ics = exact_channel(diag_phase({3, 7}));
    const ChannelMatrix csi = exact_channel(diag_phase({6, 7}));
    MitmDatabase db(table3());
    const DecideResult mitm = nested_mitm(ics, 3, 2, db);
    const bool mitm_ok = mitm.status == SearchStatus::found && mitm.decomposition->count() == 3 &&
                         check_decomposition(ics, *mitm.decomposition, table3());
    const OptResult ra = exact_tof_opt(ics, Rule::A, table3());
    const bool ra_ok = ra.status == SearchStatus::found && ra.decomposition->count() == 3 &&
                       check_decomposition(ics, *ra.decomposition, table3());
    bool below = true;
    for (std::size_t m : {1u, 2u}) {
        below = below && nested_mitm(ics, m, 2, db).status == SearchStatus::exceeds;
        below = below && exact_tof_decide(ics, m, Rule::A, table3()).status != SearchStatus::found;
    }
    // Strings read with qubit 1 on the right give I (x) CS; read literally they give CS (x) I.
    const std::vector<GenTriple> reversed{triple("ZII", "IZI", "IIZ"), triple("YII", "IZI", "IIZ"),
                                          triple("XII", "IZI", "IIZ")};
    const std::vector<GenTriple> literal{triple("IIZ", "IZI", "ZII"), triple("IIY", "IZI", "ZII"),
                                         triple("IIX", "IZI", "ZII")};
    const bool word_rev = coset_label(word_channel(reversed)).serialize() == coset_label(ics).serialize();
    const bool word_lit = coset_label(word_channel(literal)).serialize() == coset_label(csi).serialize();
    timings.cs = seconds_since(t0);
    v.require(mitm_ok, "MITM count");
    v.require(ra_ok, "rule A count");
    v.require(below, "decide at m=1,2 should fail");
    v.require(word_rev && word_lit, "reference word label");
    v.require(timings.cs < 600, "over 10 min");
    v.note << "MITM " << (mitm.decomposition ? std::to_string(mitm.decomposition->count()) : "-") << ", rule A "
           << (ra.decomposition ? std::to_string(ra.decomposition->count()) : "-")
           << ", m=1,2 rejected, word labels match, " << timings.cs << " s";
    return v;
}

Verdict criterion5() {
    Verdict v;
    int a_ok = 0, b_ok = 0, verified = 0, successes = 0;
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t tof_in = 1 + i % 5;
        const RandomInstance inst = random_chan_rep(gens3(), tof_in, 5000 + i, TrailingKind::clifford);
        std::vector<GenTriple> in_word;
        for (auto g : inst.word) in_word.push_back(gens3().triples[g]);
        const DenseMatrix target = circuit_to_unitary(decomposition_circuit(in_word, *inst.trailing_circuit));
        for (Rule rule : {Rule::A, Rule::B}) {
            const OptResult r = exact_tof_opt(inst.matrix, rule, table3());
            const bool ok = r.status == SearchStatus::found && r.decomposition->count() <= tof_in;
            if (!ok) continue;
            (rule == Rule::A ? a_ok : b_ok)++;
            ++successes;
            const Circuit c = decomposition_circuit(r.decomposition->triples, clifford_from_channel(r.decomposition->trailing));
            const double d = global_phase_distance(circuit_to_unitary(c), target);
            worst = std::max(worst, d);
            if (d < 1e-9) ++verified;
        }
    }
    v.note << "rule A " << a_ok << "/20, rule B " << b_ok << "/20, circuits verified " << verified << "/" << successes
           << " (max distance " << worst << ")";
    v.require(a_ok == 20, "rule A above tof_in");
    v.require(b_ok >= 16, "rule B below 80%");
    v.require(verified == successes, "circuit verification");
    return v;
}

Verdict criterion6() {
    Verdict v;
    MitmDatabase db(table3());
    int mismatches = 0;
    std::map<int, int> histogram;
    for (int i = 0; i < 30; ++i) {
        const RandomInstance inst = random_chan_rep(gens3(), 1 + i % 4, 6000 + i);
        const int truth = oracle::bfs_count(inst.matrix, table3(), 4);
        int mitm = -1;
        for (std::size_t m = 0; m <= 4 && mitm < 0; ++m) {
            const DecideResult r = nested_mitm(inst.matrix, m, 2, db);
            if (r.status == SearchStatus::found) mitm = static_cast<int>(r.decomposition->count());
        }
        histogram[truth]++;
        if (truth != mitm) ++mismatches;
    }
    v.note << "30 instances, mismatches " << mismatches << ", counts";
    for (auto [k, n] : histogram) v.note << " " << k << ":" << n;
    v.require(mismatches == 0, "MITM disagrees with BFS");
    return v;
}

Verdict criterion7() {
    Verdict v;
    Rng rng(7007);
    std::array<int, 3> seen{};
    int bad = 0;
    std::vector<ChannelMatrix> pool;
    for (int i = 0; i < 100; ++i) pool.push_back(random_chan_rep(gens3(), uniform_below(rng, 6), 70000 + i).matrix);
    for (int i = 0; i < 10000; ++i) {
        const ChannelMatrix& m = pool[uniform_below(rng, pool.size())];
        const ChannelMatrix p = mult_generator(table3().rows(uniform_below(rng, gens3().size())), m);
        const int delta = static_cast<int>(p.exponent()) - static_cast<int>(m.exponent());
        if (delta < -1 || delta > 1) ++bad;
        else seen[delta + 1]++;
    }
    v.note << "10000 products, delta -1/0/+1 = " << seen[0] << "/" << seen[1] << "/" << seen[2];
    v.require(bad == 0, std::to_string(bad) + " out of range");
    return v;
}

Verdict criterion8() {
    Verdict v;
    Rng rng(8008);
    int invariant = 0, recovered = 0, consistent = 0, collisions = 0;
    for (int i = 0; i < 100; ++i) {
        const ChannelMatrix w = random_chan_rep(gens3(), 1 + i % 4, 80000 + i).matrix;
        const ChannelMatrix ws = w.times(SignedPermutation::random(w.dim(), rng));
        if (coset_label(w).serialize() == coset_label(ws).serialize()) ++invariant;
        const auto s = recover_transform(w, ws);
        if (s && w.times(*s) == ws) ++recovered;
        // Unrelated pair: a label match must come with a transform, a mismatch without one.
        const ChannelMatrix other = random_chan_rep(gens3(), 1 + i % 4, 81000 + i).matrix;
        const bool same = coset_label(w).serialize() == coset_label(other).serialize();
        const auto t = recover_transform(w, other);
        collisions += same;
        if (same == (t && w.times(*t) == other)) ++consistent;
    }
    v.note << "invariant " << invariant << "/100, recovered " << recovered << "/100, unrelated pairs consistent "
           << consistent << "/100 (" << collisions << " collisions)";
    v.require(invariant == 100 && recovered == 100 && consistent == 100, "label property");
    return v;
}

Verdict criterion9() {
    Verdict v;
    std::string msg;
    try {
        exact_channel(t_on_first());
    } catch (const RingError& e) {
        msg = e.what();
    }
    v.require(msg.find("entry not in Z[1/2]") != std::string::npos && msg.find("0.7071") != std::string::npos,
              "library ring check");
    const std::string file = (std::filesystem::temp_directory_path() / "acceptance-t.json").string();
    io::write_text_file(file, io::unitary_to_json(t_on_first()).dump());
    int codes = 0;
    for (const char* engine : {"mitm", "heuristic"}) {
        std::string out;
        const int rc = run_cli(std::string("synth ") + file + " --engine " + engine, out);
        if (rc == 1 && out.find("entry not in Z[1/2]") != std::string::npos) ++codes;
    }
    std::filesystem::remove(file);
    v.require(codes == 2, "CLI exit code or message");
    v.note << "ring error: " << msg.substr(0, msg.find('\n')) << "; CLI engines rejecting " << codes << "/2";
    return v;
}

Verdict criterion10() {
    Verdict v;
    const DenseGeneratorTable dense(gens3());
    Rng rng(1010);
    // (a)
    const DenseMatrix w = dense.matrix(77) * circuit_to_unitary(random_clifford_circuit(3, rng));
    const ApproxResult r = approx_tof_opt(w, 1e-6, dense);
    v.require(r.count == 1 && r.achieved_distance <= 1e-6, "(a) generator times Clifford");
    // (b)
    int passed = 0;
    const double eps = 0.01;
    for (int i = 0; i < 20; ++i) {
        const DenseMatrix c0 = circuit_to_unitary(random_clifford_circuit(3, rng));
        const DenseMatrix e = near_identity(eps * (0.1 + 0.9 * uniform_unit(rng)), rng);
        const DenseMatrix x = e.adjoint() * c0;
        if (amplitude_test(x, eps).pass && conjugation_test(x, eps)) ++passed;
    }
    const DenseMatrix t = t_on_first();
    const bool t_amp = amplitude_test(t, eps).pass, t_conj = conjugation_test(t, eps);
    v.require(passed == 20 && !t_amp && !t_conj, "(b) near-Clifford detection");
    // (c)
    auto t0 = Clock::now();
    const ApproxDecision d1 = approx_tof_decide(t, 1, eps, dense);
    const double s1 = seconds_since(t0);
    t0 = Clock::now();
    const ApproxDecision d2 = approx_tof_decide(t, 2, eps, dense);
    const double s2 = seconds_since(t0);
    v.require(!d1.pass && !d2.pass && s1 + s2 < 900, "(c) enumeration");
    v.note << "(a) count " << r.count << " distance " << r.achieved_distance << "; (b) " << passed
           << "/20 pass, T amplitude " << (t_amp ? "pass" : "reject") << " conjugation " << (t_conj ? "pass" : "reject")
           << "; (c) m=1 " << d1.words_tested << " words " << s1 << " s, m=2 " << d2.words_tested << " words " << s2
           << " s, growth " << s2 / std::max(s1, 1e-9) << "x";
    return v;
}

DenseMatrix rotation_oracle(RotationKind k, double th) {
    using C = std::complex<double>;
    const C i(0, 1);
    const int n = rotation_arity(k);
    const int d = 1 << n;
    DenseMatrix u = DenseMatrix::Identity(d, d);
    switch (k) {
        case RotationKind::Rz:
        case RotationKind::cRz:
        case RotationKind::ccRz:
            u(d - 2, d - 2) = std::exp(-i * th / 2.0);
            u(d - 1, d - 1) = std::exp(i * th / 2.0);
            break;
        case RotationKind::cRn:
        case RotationKind::ccRn: u(d - 1, d - 1) = std::exp(i * th); break;
        case RotationKind::Givens:
            u(1, 1) = u(2, 2) = std::cos(th);
            u(1, 2) = -std::sin(th);
            u(2, 1) = std::sin(th);
            break;
    }
    return u;
}

Verdict criterion11() {
    Verdict v;
    v.require(format_rational(gen_set_bound_tof(3)) == "337.5", "bound n=3");
    v.require(gen_set_bound_tof(3) >= 135 && gen_set_bound_tof(3) >= 177, "bound below count");
    v.require(gen_set_bound_tof(2) == 0 && generate_gen_set(2).size() == 0, "n=2");
    double worst_norm = 0, worst_coeff = 0;
    for (RotationKind k : {RotationKind::Rz, RotationKind::cRz, RotationKind::cRn, RotationKind::Givens,
                           RotationKind::ccRn, RotationKind::ccRz}) {
        const int n = rotation_arity(k);
        for (int j = 0; j < 32; ++j) {
            const double th = 2 * M_PI * j / 32;
            const DenseMatrix u = rotation_oracle(k, th);
            std::map<std::string, std::complex<double>> got;
            double norm = 0;
            for (const auto& term : rotation_expansion(k, th)) {
                got[term.pauli.str()] += term.coefficient;
                norm += std::norm(term.coefficient);
            }
            worst_norm = std::max(worst_norm, std::abs(norm - 1));
            for (const auto& s : oracle::all_strings(n)) {
                const std::complex<double> ref = (oracle::pauli(s).adjoint() * u).trace() / static_cast<double>(1 << n);
                const auto it = got.find(s);
                const std::complex<double> mine = it == got.end() ? 0.0 : it->second;
                worst_coeff = std::max(worst_coeff, std::abs(mine - ref));
            }
        }
    }
    v.require(worst_norm < 1e-12 && worst_coeff < 1e-12, "rotation expansions");
    v.note << "bound(3) = " << format_rational(gen_set_bound_tof(3)) << ", bound(2) = "
           << format_rational(gen_set_bound_tof(2)) << "; 6 rotations x 32 angles, max norm error " << worst_norm
           << ", max coefficient error " << worst_coeff;
    return v;
}

Verdict criterion12() {
    Verdict v;
    v.note << "runtime ceilings in place of reference timings: n=3 " << timings.n3 << " s (< 5), n=4 " << timings.n4
           << " s (< 600), CS " << timings.cs << " s (< 600)";
    v.require(timings.n3 >= 0 && timings.n3 < 5, "n=3 ceiling");
    v.require(timings.n4 >= 0 && timings.n4 < 600, "n=4 ceiling");
    v.require(timings.cs >= 0 && timings.cs < 600, "CS ceiling");
    return v;
}

}  // namespace

int main() {
    const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3,  criterion4,
                                                         criterion5, criterion6, criterion7,  criterion8,
                                                         criterion9, criterion10, criterion11, criterion12};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = criteria[i]();
        } catch (const std::exception& e) {
            v.pass = false;
            v.note << " [exception: " << e.what() << "]";
        }
        failed += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << v.note.str() << " ("
                  << seconds_since(t0) << " s)" << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
    return failed == 0 ? 0 : 1;
}
