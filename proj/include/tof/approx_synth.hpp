#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "tof/channel.hpp"
#include "tof/exact_synth.hpp"

namespace tof {

// Slack applied to every floating band comparison.
inline constexpr double kBandSlack = 1e-9;

struct AmplitudeProfile {
    std::vector<double> values;        // |Tr(W'P)|/N, descending
    std::vector<PauliIndex> paulis;    // matching Paulis
    std::size_t split = 0;             // M of the first passing band, 0 if none
    bool pass = false;
};

AmplitudeProfile amplitude_test(const DenseMatrix& w_prime, double epsilon);
bool conjugation_test(const DenseMatrix& w_prime, double epsilon);

struct ReconstructedClifford {
    std::vector<std::pair<PauliIndex, std::complex<double>>> terms;  // C~0 = sum coeff * P
    DenseMatrix unitary;
    Circuit circuit;
};

// w_prime = W^dagger * (generator product); the result is C0 with W ~ product * C0.
// Throws std::runtime_error on reconstruction failure.
ReconstructedClifford reconstruct_trailing_clifford(const DenseMatrix& w_prime, const AmplitudeProfile& profile);

struct ApproxOptions {
    unsigned workers = 1;
    // When set, a word is accepted only if the reconstructed circuit is within epsilon.
    bool require_distance = false;
};

struct ApproxDecision {
    bool pass = false;
    std::vector<std::size_t> word;
    AmplitudeProfile profile;
    DenseMatrix w_prime;
    std::size_t words_tested = 0;
};

// Dense generator unitaries with their canonical forms for the consecutive filter.
class DenseGeneratorTable {
public:
    explicit DenseGeneratorTable(const GenSet& gens);
    const GenSet& gens() const { return gens_; }
    std::size_t size() const { return mats_.size(); }
    const DenseMatrix& matrix(std::size_t i) const { return mats_[i]; }
    bool same_generator(std::size_t i, std::size_t j) const { return canonical_[i] == canonical_[j]; }

private:
    GenSet gens_;
    std::vector<DenseMatrix> mats_;
    std::vector<GenTriple> canonical_;
};

ApproxDecision approx_tof_decide(const DenseMatrix& w, std::size_t m, double epsilon, const DenseGeneratorTable& table,
                                 const ApproxOptions& opts = {});

struct ApproxResult {
    double epsilon = 0;
    std::size_t count = 0;
    std::vector<std::size_t> word;
    std::vector<GenTriple> triples;
    ReconstructedClifford trailing;
    double achieved_distance = 0;
};

// Throws BudgetError when nothing passes up to max_count.
ApproxResult approx_tof_opt(const DenseMatrix& w, double epsilon, const DenseGeneratorTable& table,
                            std::size_t max_count = 2, const ApproxOptions& opts = {});

}  // namespace tof
