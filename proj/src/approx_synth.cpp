#include "tof/approx_synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>
#include <stdexcept>

#include "parallel.hpp"

namespace tof {

AmplitudeProfile amplitude_test(const DenseMatrix& w_prime, double epsilon) {
    AmplitudeProfile prof;
    const auto tr = pauli_coefficients(w_prime);
    const std::size_t count = tr.size();
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> mag(count);
    for (std::size_t i = 0; i < count; ++i) mag[i] = std::abs(tr[i]);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
    prof.values.resize(count);
    prof.paulis.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        prof.values[i] = mag[order[i]];
        prof.paulis[i] = order[i];
    }
    const double e2 = 2 * epsilon * epsilon - std::pow(epsilon, 4);
    for (std::size_t m = 1; m <= count; ++m) {
        const double md = static_cast<double>(m);
        const double delta = std::sqrt(md * std::max(0.0, e2));
        const double lo = (1 - epsilon * epsilon) / std::sqrt(md) - delta;
        const double hi = 1 / std::sqrt(md) + delta;
        if (prof.values[0] > hi + kBandSlack || prof.values[m - 1] < lo - kBandSlack) continue;
        if (m < count && prof.values[m] > delta + kBandSlack) continue;
        prof.split = m;
        prof.pass = true;
        break;
    }
    return prof;
}

bool conjugation_test(const DenseMatrix& w_prime, double epsilon) {
    const int n = qubits_of_dimension(w_prime.rows());
    const std::size_t dim = std::size_t{1} << (2 * n);
    const double big = 1 - 4 * epsilon * epsilon + 2 * std::pow(epsilon, 4);
    const double low = 2 * epsilon;
    const double inv = 1.0 / static_cast<double>(w_prime.rows());
    const DenseMatrix wd = w_prime.adjoint();
    for (std::size_t out = 0; out < dim; ++out) {
        DenseMatrix a = w_prime * pauli_matrix(Pauli::from_index(n, out)) * wd;
        const auto tr = pauli_traces(a);
        int large = 0;
        for (const auto& v : tr) {
            const double t = std::abs(v) * inv;
            if (t >= big - kBandSlack) ++large;
            else if (t > low + kBandSlack) return false;
        }
        if (large != 1) return false;
    }
    return true;
}

ReconstructedClifford reconstruct_trailing_clifford(const DenseMatrix& w_prime, const AmplitudeProfile& profile) {
    if (!profile.pass || profile.split == 0) throw std::runtime_error("reconstruction needs a passing amplitude profile");
    const int n = qubits_of_dimension(w_prime.rows());
    const auto coeff = pauli_coefficients(w_prime);
    const std::size_t m = profile.split;
    const double r = 1 / std::sqrt(static_cast<double>(m));
    // Phases relative to the largest coefficient; the common phase is irrelevant (c = r, d = 0).
    const std::complex<double> ref = coeff[profile.paulis[0]];
    ReconstructedClifford out;
    const Eigen::Index d = w_prime.rows();
    out.unitary = DenseMatrix::Zero(d, d);
    for (std::size_t i = 0; i < m; ++i) {
        const PauliIndex p = profile.paulis[i];
        std::complex<double> a = coeff[p] / ref;
        a /= std::abs(a);
        const std::complex<double> c = r * std::conj(a);
        out.terms.emplace_back(p, c);
        out.unitary += c * pauli_matrix(Pauli::from_index(n, p));
    }
    const double err = (out.unitary.adjoint() * out.unitary - DenseMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > 1e-3) throw std::runtime_error("reconstructed trailing Clifford is not unitary");
    // Nearest unitary, so float noise in the phases does not trip the unitarity check.
    Eigen::JacobiSVD<DenseMatrix> svd(out.unitary, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.unitary = svd.matrixU() * svd.matrixV().adjoint();
    RealMatrix ch = chan_rep_unitary(out.unitary);
    RealMatrix rounded = ch.array().round();
    if ((ch - rounded).cwiseAbs().maxCoeff() > 0.25) throw std::runtime_error("reconstructed channel is not a signed permutation");
    out.circuit = clifford_from_channel(snap_to_dyadic(rounded, 0, 0.0));
    return out;
}

DenseGeneratorTable::DenseGeneratorTable(const GenSet& gens) : gens_(gens) {
    for (const auto& t : gens.triples) {
        mats_.push_back(gen_element_unitary(t));
        canonical_.push_back(canonical_triple(t));
    }
}

namespace {

struct Candidate {
    bool ok = false;
    AmplitudeProfile profile;
};

Candidate test_word(const DenseMatrix& wp, double epsilon, bool require_distance, const DenseMatrix& w,
                    const DenseMatrix& product) {
    Candidate c;
    c.profile = amplitude_test(wp, epsilon);
    if (!c.profile.pass || !conjugation_test(wp, epsilon)) return c;
    if (require_distance) {
        try {
            auto rec = reconstruct_trailing_clifford(wp, c.profile);
            const double d = global_phase_distance(product * circuit_to_unitary(rec.circuit), w);
            if (d > epsilon + kBandSlack) return c;
        } catch (const std::runtime_error&) {
            return c;
        } catch (const std::invalid_argument&) {
            return c;
        }
    }
    c.ok = true;
    return c;
}

}  // namespace

ApproxDecision approx_tof_decide(const DenseMatrix& w, std::size_t m, double epsilon, const DenseGeneratorTable& table,
                                 const ApproxOptions& opts) {
    ApproxDecision res;
    const DenseMatrix wd = w.adjoint();
    const Eigen::Index d = w.rows();
    if (m == 0) {
        auto c = test_word(wd, epsilon, opts.require_distance, w, DenseMatrix::Identity(d, d));
        res.pass = c.ok;
        res.profile = std::move(c.profile);
        res.w_prime = wd;
        res.words_tested = 1;
        return res;
    }
    const std::size_t ng = table.size();
    if (ng == 0) return res;
    // Prefix partition on the first generator; the smallest passing index wins.
    std::atomic<std::size_t> best_first{ng};
    std::vector<std::optional<std::vector<std::size_t>>> found(ng);
    std::vector<std::size_t> tested(ng, 0);
    detail::parallel_for(ng, opts.workers, [&](std::size_t first) {
        if (first > best_first.load()) return;
        std::vector<std::size_t> word{first};
        std::vector<DenseMatrix> prods{table.matrix(first)};
        // Depth-first over the remaining positions in lexicographic order.
        std::vector<std::size_t> next{0};
        auto leaf = [&]() -> bool {
            ++tested[first];
            const DenseMatrix wp = wd * prods.back();
            if (test_word(wp, epsilon, opts.require_distance, w, prods.back()).ok) {
                found[first] = word;
                return true;
            }
            return false;
        };
        if (m == 1) {
            if (leaf()) {
                std::size_t cur = best_first.load();
                while (first < cur && !best_first.compare_exchange_weak(cur, first)) {}
            }
            return;
        }
        while (!word.empty()) {
            if (first > best_first.load()) return;
            if (word.size() == m) {
                if (leaf()) {
                    std::size_t cur = best_first.load();
                    while (first < cur && !best_first.compare_exchange_weak(cur, first)) {}
                    return;
                }
                word.pop_back();
                prods.pop_back();
                next.pop_back();
                continue;
            }
            std::size_t& g = next.back();
            while (g < ng && table.same_generator(word.back(), g)) ++g;
            if (g >= ng) {
                word.pop_back();
                prods.pop_back();
                next.pop_back();
                continue;
            }
            const std::size_t pick = g++;
            word.push_back(pick);
            prods.push_back(prods.back() * table.matrix(pick));
            next.push_back(0);
        }
    });
    for (auto t : tested) res.words_tested += t;
    const std::size_t bf = best_first.load();
    if (bf < ng && found[bf]) {
        res.pass = true;
        res.word = *found[bf];
        DenseMatrix prod = DenseMatrix::Identity(d, d);
        for (auto g : res.word) prod = prod * table.matrix(g);
        res.w_prime = wd * prod;
        res.profile = amplitude_test(res.w_prime, epsilon);
    }
    return res;
}

ApproxResult approx_tof_opt(const DenseMatrix& w, double epsilon, const DenseGeneratorTable& table, std::size_t max_count,
                            const ApproxOptions& opts) {
    ApproxOptions o = opts;
    o.require_distance = true;
    for (std::size_t m = 0; m <= max_count; ++m) {
        ApproxDecision dec = approx_tof_decide(w, m, epsilon, table, o);
        if (!dec.pass) continue;
        ApproxResult res;
        res.epsilon = epsilon;
        res.count = m;
        res.word = dec.word;
        for (auto g : dec.word) res.triples.push_back(table.gens().triples[g]);
        res.trailing = reconstruct_trailing_clifford(dec.w_prime, dec.profile);
        DenseMatrix prod = DenseMatrix::Identity(w.rows(), w.cols());
        for (auto g : dec.word) prod = prod * table.matrix(g);
        res.achieved_distance = global_phase_distance(prod * circuit_to_unitary(res.trailing.circuit), w);
        return res;
    }
    throw BudgetError("no word of length <= " + std::to_string(max_count) + " passes at epsilon " + std::to_string(epsilon));
}

}  // namespace tof
