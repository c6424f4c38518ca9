#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tof/exact_synth.hpp"

using namespace tof;

namespace {

const GenSet& gens3() {
    static const GenSet g = generate_gen_set(3);
    return g;
}

const GeneratorTable& table3() {
    static const GeneratorTable t(gens3());
    return t;
}

// CS on qubits 2 and 3 of three.
ChannelMatrix i_cs() {
    DenseMatrix u = DenseMatrix::Identity(8, 8);
    u(3, 3) = {0, 1};
    u(7, 7) = {0, 1};
    return snap_to_dyadic(chan_rep_unitary(u));
}

}  // namespace

TEST(ShMatrix, ClassifyExamples) {
    EXPECT_EQ(classify_child(Rule::B, 3, 11, 2, 10), (ShCell{0, 0}));
    EXPECT_EQ(classify_child(Rule::B, 2, 5, 2, 10), (ShCell{1, 2}));
    EXPECT_EQ(classify_child(Rule::B, 1, 10, 2, 10), (ShCell{2, 1}));
    EXPECT_EQ(classify_child(Rule::A, 3, 1, 2, 10), (ShCell{0, 0}));
    EXPECT_EQ(classify_child(Rule::A, 2, 99, 2, 10), (ShCell{1, 0}));
    EXPECT_EQ(classify_child(Rule::A, 1, 99, 2, 10), (ShCell{1, 0}));
}

TEST(ShMatrix, UpdateAndMinimum) {
    SHMatrix sh;
    EXPECT_FALSE(min_sh(sh, Rule::B).has_value());
    update_sh(sh, Rule::B, 3, 11, 2, 10);
    update_sh(sh, Rule::B, 3, 11, 2, 10);
    update_sh(sh, Rule::B, 1, 5, 2, 10);
    update_sh(sh, Rule::B, 2, 10, 2, 10);
    EXPECT_EQ(sh.total(), 4u);
    // Ties between (2,2) and (1,1) go to the sde-decrease row.
    EXPECT_EQ(*min_sh(sh, Rule::B), (ShCell{2, 2}));
    SHMatrix a;
    update_sh(a, Rule::A, 3, 0, 2, 0);
    update_sh(a, Rule::A, 1, 0, 2, 0);
    EXPECT_EQ(*min_sh(a, Rule::A), (ShCell{1, 0}));
    update_sh(a, Rule::A, 2, 0, 2, 0);
    EXPECT_EQ(*min_sh(a, Rule::A), (ShCell{0, 0}));
}

TEST(ShMatrix, FirstLevelCountsEveryChild) {
    DecideResult r = exact_tof_decide(i_cs(), 3, Rule::B, table3());
    ASSERT_FALSE(r.sh_matrices.empty());
    // The root has no previous generator; children over the sde bound are not classified.
    EXPECT_LE(r.sh_matrices[0].total(), gens3().size());
    EXPECT_GT(r.sh_matrices[0].total(), 0u);
}

TEST(ExactSynth, CliffordIsCountZero) {
    Rng rng(1);
    const ChannelMatrix c = channel_of_clifford(random_clifford_circuit(3, rng));
    const OptResult r = exact_tof_opt(c, Rule::A, table3());
    ASSERT_EQ(r.status, SearchStatus::found);
    EXPECT_EQ(r.decomposition->count(), 0u);
    MitmDatabase db(table3());
    EXPECT_EQ(nested_mitm(c, 3, 2, db).decomposition->count(), 0u);
}

TEST(ExactSynth, GeneratorIsCountOne) {
    for (std::size_t g : {0u, 50u, 134u}) {
        const ChannelMatrix u = table3().rows(g).expand();
        const DecideResult r = exact_tof_decide(u, 1, Rule::A, table3());
        ASSERT_EQ(r.status, SearchStatus::found);
        EXPECT_EQ(r.decomposition->count(), 1u);
        EXPECT_EQ(coset_label(table3().rows(r.decomposition->word[0]).expand()), coset_label(u));
        Rng rng(g);
        const ChannelMatrix us = u.times(SignedPermutation::random(64, rng));
        MitmDatabase db(table3());
        const DecideResult m = nested_mitm(us, 1, 2, db);
        ASSERT_EQ(m.status, SearchStatus::found);
        EXPECT_EQ(m.decomposition->count(), 1u);
    }
}

TEST(ExactSynth, ControlledSHasCountThree) {
    const ChannelMatrix u = i_cs();
    for (Rule rule : {Rule::A, Rule::B}) {
        const OptResult r = exact_tof_opt(u, rule, table3());
        ASSERT_EQ(r.status, SearchStatus::found);
        EXPECT_EQ(r.decomposition->count(), 3u);
        EXPECT_TRUE(check_decomposition(u, *r.decomposition, table3()));
        EXPECT_TRUE(verify_decomposition(u, r.decomposition->triples, r.decomposition->trailing).pass);
    }
    MitmDatabase db(table3());
    EXPECT_EQ(nested_mitm(u, 1, 2, db).status, SearchStatus::exceeds);
    EXPECT_EQ(nested_mitm(u, 2, 2, db).status, SearchStatus::exceeds);
    const DecideResult m = nested_mitm(u, 3, 2, db);
    ASSERT_EQ(m.status, SearchStatus::found);
    EXPECT_EQ(m.decomposition->count(), 3u);
    EXPECT_NE(exact_tof_decide(u, 2, Rule::A, table3()).status, SearchStatus::found);
}

TEST(ExactSynth, MitmMatchesBreadthFirstOracle) {
    MitmDatabase db(table3());
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const RandomInstance inst = random_chan_rep(gens3(), 1 + seed % 3, seed);
        const int truth = oracle::bfs_count(inst.matrix, table3(), 3);
        ASSERT_GE(truth, 0);
        std::size_t found = 0;
        for (std::size_t m = 0; m <= 3; ++m) {
            const DecideResult r = nested_mitm(inst.matrix, m, 2, db);
            if (r.status == SearchStatus::found) {
                found = r.decomposition->count();
                EXPECT_TRUE(check_decomposition(inst.matrix, *r.decomposition, table3()));
                break;
            }
        }
        EXPECT_EQ(found, static_cast<std::size_t>(truth)) << "seed " << seed;
    }
}

TEST(ExactSynth, NestingThreeAgreesWithTwo) {
    MitmDatabase db(table3());
    const RandomInstance inst = random_chan_rep(gens3(), 3, 77);
    const DecideResult a = nested_mitm(inst.matrix, 3, 2, db);
    const DecideResult b = nested_mitm(inst.matrix, 3, 3, db);
    ASSERT_EQ(a.status, SearchStatus::found);
    ASSERT_EQ(b.status, SearchStatus::found);
    EXPECT_EQ(a.decomposition->count(), b.decomposition->count());
}

TEST(ExactSynth, HeuristicRoundTrip) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const RandomInstance inst = random_chan_rep(gens3(), 3, seed);
        const OptResult r = exact_tof_opt(inst.matrix, Rule::A, table3());
        ASSERT_EQ(r.status, SearchStatus::found);
        EXPECT_LE(r.decomposition->count(), 3u);
        EXPECT_TRUE(check_decomposition(inst.matrix, *r.decomposition, table3()));
    }
}

TEST(ExactSynth, WorkerCountDoesNotChangeTheResult) {
    const RandomInstance inst = random_chan_rep(gens3(), 4, 9);
    SearchOptions one, four;
    four.workers = 4;
    const OptResult a = exact_tof_opt(inst.matrix, Rule::A, table3(), 12, one);
    const OptResult b = exact_tof_opt(inst.matrix, Rule::A, table3(), 12, four);
    ASSERT_EQ(a.status, SearchStatus::found);
    ASSERT_EQ(b.status, SearchStatus::found);
    EXPECT_EQ(a.decomposition->word, b.decomposition->word);
    EXPECT_EQ(a.decomposition->trailing, b.decomposition->trailing);
}

TEST(ExactSynth, DecideReportsProvenExcessFromSde) {
    const RandomInstance inst = random_chan_rep(gens3(), 4, 3);
    ASSERT_GE(matrix_sde(inst.matrix), 3u);
    EXPECT_EQ(exact_tof_decide(inst.matrix, 1, Rule::A, table3()).status, SearchStatus::exceeds);
}

TEST(ExactSynth, MitmBudget) {
    MitmDatabase db(table3());
    SearchOptions tiny;
    tiny.memory_budget = 1024;
    const RandomInstance inst = random_chan_rep(gens3(), 3, 4);
    EXPECT_EQ(nested_mitm(inst.matrix, 6, 2, db, tiny).status, SearchStatus::budget);
}

TEST(ExactSynth, CosetLabelOfTransposeAgrees) {
    const ChannelMatrix m = strip_word(table3().rows(3).expand(), {5, 9}, table3());
    EXPECT_EQ(coset_label_of_transpose(m), coset_label(m.transpose()));
}
