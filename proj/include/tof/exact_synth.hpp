#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tof/channel.hpp"

namespace tof {

enum class Rule { A, B };

// rows: sde {increase, unchanged, decrease}; columns: hamming in the same order.
// Under rule A only two cells are used: (0,0) for sde increase and (1,0) for
// sde non-increase.
struct SHMatrix {
    std::array<std::array<std::size_t, 3>, 3> cells{};
    std::size_t total() const;
};

struct ShCell {
    int row = 0;
    int col = 0;
    friend bool operator==(const ShCell&, const ShCell&) = default;
};

ShCell classify_child(Rule rule, unsigned child_sde, std::size_t child_ham, unsigned parent_sde, std::size_t parent_ham);
ShCell update_sh(SHMatrix& sh, Rule rule, unsigned child_sde, std::size_t child_ham, unsigned parent_sde,
                 std::size_t parent_ham);
// Smallest nonzero cell; scan order is sde-decrease row first, then
// hamming-decrease column first. Empty matrix gives nullopt.
std::optional<ShCell> min_sh(const SHMatrix& sh, Rule rule);

// <U> = <G_word[0]> ... <G_word[m-1]> * trailing.
struct Decomposition {
    std::vector<std::size_t> word;  // indices into the generating set
    std::vector<GenTriple> triples;
    ChannelMatrix trailing;

    std::size_t count() const { return word.size(); }
};

enum class SearchStatus {
    found,
    exceeds,    // proven: count > m
    exhausted,  // heuristic pruned every node; undecided
    budget,     // memory or frontier budget exceeded
};

const char* status_name(SearchStatus s);

struct SearchOptions {
    unsigned workers = 1;
    std::size_t frontier_limit = 500000;
    std::size_t memory_budget = std::size_t{2} << 30;  // bytes
    std::function<void(const std::string&)> progress;
};

struct DecideResult {
    SearchStatus status = SearchStatus::exhausted;
    std::optional<Decomposition> decomposition;
    std::vector<std::size_t> frontier_sizes;
    std::vector<SHMatrix> sh_matrices;
    std::string message;
};

// Applies the word to u: returns G_w[m-1] ... G_w[0] u.
ChannelMatrix strip_word(const ChannelMatrix& u, const std::vector<std::size_t>& word, const GeneratorTable& table);
// True if stripping the word from u leaves a signed permutation equal to d.trailing.
bool check_decomposition(const ChannelMatrix& u, const Decomposition& d, const GeneratorTable& table);

DecideResult exact_tof_decide(const ChannelMatrix& u, std::size_t m, Rule rule, const GeneratorTable& table,
                              const SearchOptions& opts = {});

struct OptResult {
    SearchStatus status = SearchStatus::exhausted;
    std::optional<Decomposition> decomposition;
    std::size_t last_m = 0;
    std::vector<std::vector<std::size_t>> frontier_sizes;  // per tried m
    std::string message;
};

OptResult exact_tof_opt(const ChannelMatrix& u, Rule rule, const GeneratorTable& table, std::size_t max_count = 12,
                        const SearchOptions& opts = {});

// Label of the matrix whose columns are the rows of t (label of t^T).
CosetLabel coset_label_of_transpose(const ChannelMatrix& t);

// Breadth-first closure of coset labels of generator products. Entry words
// are built by appending one generator to a shorter stored word.
class MitmDatabase {
public:
    explicit MitmDatabase(const GeneratorTable& table);

    std::size_t level() const { return level_; }
    std::size_t size() const { return entries_.size(); }
    // Throws BudgetError if the estimated size exceeds the budget.
    void extend_to(std::size_t level, const SearchOptions& opts = {});
    std::size_t estimated_bytes(std::size_t level) const;

    struct Entry {
        std::uint32_t parent;  // prefix entry; self for the root
        std::uint32_t gen;
        std::uint32_t length;
    };

    const Entry& entry(std::uint32_t id) const { return entries_[id]; }
    std::optional<std::uint32_t> find(const Digest128& d) const;
    std::vector<std::size_t> word(std::uint32_t id) const;
    const std::vector<std::uint32_t>& children(std::uint32_t id) const { return children_[id]; }
    const GeneratorTable& table() const { return *table_; }

private:
    const GeneratorTable* table_;
    std::size_t level_ = 0;
    std::vector<Entry> entries_;
    std::vector<std::vector<std::uint32_t>> children_;
    std::unordered_map<Digest128, std::uint32_t, Digest128Hash> index_;
};

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

DecideResult nested_mitm(const ChannelMatrix& u, std::size_t m, unsigned c, MitmDatabase& db,
                         const SearchOptions& opts = {});

}  // namespace tof
