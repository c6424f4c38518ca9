#include "tof/exact_synth.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "parallel.hpp"

namespace tof {

std::size_t SHMatrix::total() const {
    std::size_t t = 0;
    for (const auto& r : cells)
        for (auto v : r) t += v;
    return t;
}

namespace {

int delta_class(long long delta) { return delta > 0 ? 0 : (delta == 0 ? 1 : 2); }

}  // namespace

ShCell classify_child(Rule rule, unsigned child_sde, std::size_t child_ham, unsigned parent_sde,
                      std::size_t parent_ham) {
    const int s = delta_class(static_cast<long long>(child_sde) - static_cast<long long>(parent_sde));
    if (rule == Rule::A) return ShCell{s == 0 ? 0 : 1, 0};
    const int h = delta_class(static_cast<long long>(child_ham) - static_cast<long long>(parent_ham));
    return ShCell{s, h};
}

ShCell update_sh(SHMatrix& sh, Rule rule, unsigned child_sde, std::size_t child_ham, unsigned parent_sde,
                 std::size_t parent_ham) {
    ShCell c = classify_child(rule, child_sde, child_ham, parent_sde, parent_ham);
    ++sh.cells[c.row][c.col];
    return c;
}

std::optional<ShCell> min_sh(const SHMatrix& sh, Rule rule) {
    static const ShCell order_a[] = {{1, 0}, {0, 0}};
    static const ShCell order_b[] = {{2, 2}, {2, 1}, {2, 0}, {1, 2}, {1, 1}, {1, 0}, {0, 2}, {0, 1}, {0, 0}};
    std::optional<ShCell> best;
    std::size_t best_count = 0;
    auto scan = [&](const ShCell& c) {
        std::size_t v = sh.cells[c.row][c.col];
        if (v && (!best || v < best_count)) {
            best = c;
            best_count = v;
        }
    };
    if (rule == Rule::A)
        for (const auto& c : order_a) scan(c);
    else
        for (const auto& c : order_b) scan(c);
    return best;
}

const char* status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::exceeds: return "exceeds";
        case SearchStatus::exhausted: return "exhausted";
        case SearchStatus::budget: return "budget";
    }
    return "?";
}

ChannelMatrix strip_word(const ChannelMatrix& u, const std::vector<std::size_t>& word, const GeneratorTable& table) {
    ChannelMatrix m = u;
    for (auto g : word) m = mult_generator(table.rows(g), m);
    return m;
}

bool check_decomposition(const ChannelMatrix& u, const Decomposition& d, const GeneratorTable& table) {
    ChannelMatrix s = strip_word(u, d.word, table);
    return is_clifford_channel(s) && s == d.trailing;
}

namespace {

Decomposition make_decomposition(std::vector<std::size_t> word, ChannelMatrix trailing, const GeneratorTable& table) {
    Decomposition d;
    d.word = std::move(word);
    for (auto g : d.word) d.triples.push_back(table.triple(g));
    d.trailing = std::move(trailing);
    return d;
}

void report(const SearchOptions& opts, const std::string& msg) {
    if (opts.progress) opts.progress(msg);
}

// Frontier nodes with equal coset labels have children with equal labels,
// sde and hamming weight, so they are merged into one weighted node. The
// weights make the cell counts those of the unmerged frontier.
// Only words are stored; the matrix is recomputed from the input on demand.
struct Node {
    unsigned sde = 0;
    std::size_t ham = 0;
    std::uint64_t weight = 1;
    // Member count per last generator; the consecutive-repeat filter
    // removes exactly these members from each child count.
    std::vector<std::pair<std::uint32_t, std::uint64_t>> last;
    // Words of up to two members whose last generators differ.
    std::vector<std::vector<std::size_t>> paths;
};

struct ChildStat {
    std::uint32_t gen;
    std::uint32_t ham;
    std::uint32_t sde;
};

std::uint64_t excluded(const Node& node, std::size_t g, const GeneratorTable& table) {
    std::uint64_t e = 0;
    for (const auto& [l, c] : node.last)
        if (table.same_generator(l, g)) e += c;
    return e;
}

// A member word that may be extended by g.
const std::vector<std::size_t>* path_for(const Node& node, std::size_t g, const GeneratorTable& table) {
    for (const auto& p : node.paths)
        if (p.empty() || !table.same_generator(p.back(), g)) return &p;
    return nullptr;
}

void add_path(Node& node, std::vector<std::size_t> path, const GeneratorTable& table) {
    if (node.paths.size() >= 2) return;
    for (const auto& p : node.paths)
        if (table.same_generator(p.back(), path.back())) return;
    node.paths.push_back(std::move(path));
}

}  // namespace

DecideResult exact_tof_decide(const ChannelMatrix& u, std::size_t m, Rule rule, const GeneratorTable& table,
                              const SearchOptions& opts) {
    DecideResult res;
    if (is_clifford_channel(u)) {
        res.status = SearchStatus::found;
        res.decomposition = make_decomposition({}, u, table);
        return res;
    }
    if (table.size() == 0 || table.gens().n != u.qubits()) throw std::invalid_argument("generating set does not match input");
    if (matrix_sde(u) > m) {
        // Each generator lowers the sde by at most one.
        res.status = SearchStatus::exceeds;
        res.message = "sde " + std::to_string(matrix_sde(u)) + " exceeds " + std::to_string(m);
        return res;
    }
    // Two words, the per-generator counts and hash-map overhead.
    const std::size_t node_bytes = 2 * m * sizeof(std::size_t) + 256;
    std::vector<Node> frontier(1);
    frontier[0].sde = u.exponent();
    frontier[0].ham = matrix_hamming(u);
    frontier[0].paths.push_back({});
    const std::size_t ng = table.size();

    for (std::size_t level = 1; level <= m; ++level) {
        // Children at depth i need sde <= m - i to reach sde 0 in time; only those are kept.
        const unsigned budget = static_cast<unsigned>(m - level);
        // Pass 1: observables of every child within the budget, plus sde-0 hits.
        std::vector<std::vector<ChildStat>> stats(frontier.size());
        detail::parallel_for(frontier.size(), opts.workers, [&](std::size_t p) {
            const Node& node = frontier[p];
            const ChannelMatrix nm = strip_word(u, node.paths.front(), table);
            auto& out = stats[p];
            for (std::size_t g = 0; g < ng; ++g) {
                if (node.weight == excluded(node, g, table)) continue;
                ChannelMatrix child = mult_generator(table.rows(g), nm);
                if (child.exponent() > budget && child.exponent() != 0) continue;
                out.push_back({static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(matrix_hamming(child)),
                               child.exponent()});
            }
            out.shrink_to_fit();
        });
        for (std::size_t p = 0; p < frontier.size(); ++p) {
            for (const auto& c : stats[p]) {
                if (c.sde == 0) {
                    std::vector<std::size_t> word = *path_for(frontier[p], c.gen, table);
                    word.push_back(c.gen);
                    res.status = SearchStatus::found;
                    res.decomposition = make_decomposition(word, strip_word(u, word, table), table);
                    return res;
                }
            }
        }
        SHMatrix sh;
        for (std::size_t p = 0; p < frontier.size(); ++p)
            for (const auto& c : stats[p]) {
                const ShCell cc = classify_child(rule, c.sde, c.ham, frontier[p].sde, frontier[p].ham);
                sh.cells[cc.row][cc.col] += frontier[p].weight - excluded(frontier[p], c.gen, table);
            }
        res.sh_matrices.push_back(sh);
        const auto cell = min_sh(sh, rule);
        if (opts.progress) {
            std::string cells;
            for (const auto& r : sh.cells)
                for (auto v : r) cells += (cells.empty() ? "" : " ") + std::to_string(v);
            report(opts, "level " + std::to_string(level) + ": sh [" + cells + "]" +
                             (cell ? " cell (" + std::to_string(cell->row) + "," + std::to_string(cell->col) + ")" : " no cell"));
        }
        if (level == m || !cell) {
            res.frontier_sizes.push_back(0);
            break;
        }
        // Pass 2: survivors in (parent, generator) order, merged by coset label.
        std::vector<std::vector<std::uint32_t>> keep(frontier.size());
        std::size_t next_size = 0;
        for (std::size_t p = 0; p < frontier.size(); ++p) {
            for (const auto& c : stats[p]) {
                const ShCell cc = classify_child(rule, c.sde, c.ham, frontier[p].sde, frontier[p].ham);
                if (c.sde == 1 || cc == *cell) {
                    keep[p].push_back(c.gen);
                    next_size += frontier[p].weight - excluded(frontier[p], c.gen, table);
                }
            }
        }
        res.frontier_sizes.push_back(next_size);
        std::vector<std::size_t> offset(frontier.size() + 1, 0);
        for (std::size_t p = 0; p < frontier.size(); ++p) offset[p + 1] = offset[p] + keep[p].size();
        stats = {};
        std::vector<Digest128> digests(offset.back());
        std::vector<std::pair<unsigned, std::size_t>> observed(offset.back());  // sde, hamming
        detail::parallel_for(frontier.size(), opts.workers, [&](std::size_t p) {
            if (keep[p].empty()) return;
            const ChannelMatrix nm = strip_word(u, frontier[p].paths.front(), table);
            for (std::size_t j = 0; j < keep[p].size(); ++j) {
                const ChannelMatrix child = mult_generator(table.rows(keep[p][j]), nm);
                digests[offset[p] + j] = coset_label(child).digest();
                observed[offset[p] + j] = {child.exponent(), matrix_hamming(child)};
            }
        });
        std::vector<Node> next;
        std::unordered_map<Digest128, std::size_t, Digest128Hash> where;
        for (std::size_t p = 0; p < frontier.size(); ++p) {
            const Node& parent = frontier[p];
            for (std::size_t j = 0; j < keep[p].size(); ++j) {
                const std::uint32_t g = keep[p][j];
                const std::uint64_t w = parent.weight - excluded(parent, g, table);
                std::vector<std::size_t> path = *path_for(parent, g, table);
                path.push_back(g);
                auto [it, fresh] = where.try_emplace(digests[offset[p] + j], next.size());
                if (fresh) {
                    if (next.size() >= opts.frontier_limit || (next.size() + 1) * node_bytes > opts.memory_budget) {
                        res.status = SearchStatus::budget;
                        res.message = "frontier exceeds the budget at level " + std::to_string(level) + " (" +
                                      std::to_string(next.size() + 1) + " distinct cosets)";
                        return res;
                    }
                    Node& fresh_node = next.emplace_back();
                    fresh_node.weight = 0;
                    std::tie(fresh_node.sde, fresh_node.ham) = observed[offset[p] + j];
                }
                Node& n = next[it->second];
                n.weight += w;
                auto lt = std::find_if(n.last.begin(), n.last.end(), [&](const auto& e) { return e.first == g; });
                if (lt == n.last.end()) n.last.emplace_back(g, w);
                else lt->second += w;
                add_path(n, std::move(path), table);
            }
        }
        report(opts, "level " + std::to_string(level) + ": frontier " + std::to_string(next_size) + " (" +
                         std::to_string(next.size()) + " distinct cosets)");
        if (next.empty()) break;
        frontier = std::move(next);
    }
    res.status = SearchStatus::exhausted;
    res.message = "heuristic found no decomposition with at most " + std::to_string(m) + " generators (undecided)";
    return res;
}

OptResult exact_tof_opt(const ChannelMatrix& u, Rule rule, const GeneratorTable& table, std::size_t max_count,
                        const SearchOptions& opts) {
    OptResult res;
    if (is_clifford_channel(u)) {
        res.status = SearchStatus::found;
        res.decomposition = make_decomposition({}, u, table);
        return res;
    }
    for (std::size_t m = u.exponent(); m <= max_count; ++m) {
        report(opts, "trying count " + std::to_string(m));
        DecideResult d = exact_tof_decide(u, m, rule, table, opts);
        res.frontier_sizes.push_back(d.frontier_sizes);
        res.last_m = m;
        if (d.status == SearchStatus::found) {
            res.status = SearchStatus::found;
            res.decomposition = std::move(d.decomposition);
            return res;
        }
        if (d.status == SearchStatus::budget) {
            res.status = SearchStatus::budget;
            res.message = d.message;
            return res;
        }
    }
    res.status = SearchStatus::budget;
    res.message = "no decomposition found up to the iteration cap " + std::to_string(max_count);
    return res;
}

// ---------------------------------------------------------------- MITM

CosetLabel coset_label_of_transpose(const ChannelMatrix& t) {
    // Rows of t are the columns of t^T, already contiguous.
    const std::size_t dim = t.dim();
    std::vector<std::int64_t> cols = t.numerators();
    for (std::size_t j = 0; j < dim; ++j) {
        std::int64_t* c = cols.data() + j * dim;
        std::size_t i = 0;
        while (i < dim && c[i] == 0) ++i;
        if (i < dim && c[i] < 0)
            for (std::size_t l = 0; l < dim; ++l) c[l] = -c[l];
    }
    std::vector<std::uint32_t> order(dim);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const std::int64_t* ca = cols.data() + a * dim;
        const std::int64_t* cb = cols.data() + b * dim;
        return std::lexicographical_compare(ca, ca + dim, cb, cb + dim);
    });
    CosetLabel l;
    l.n = t.qubits();
    l.exponent = t.exponent();
    l.columns.resize(dim * dim);
    for (std::size_t j = 0; j < dim; ++j) std::copy_n(cols.data() + order[j] * dim, dim, l.columns.data() + j * dim);
    return l;
}

MitmDatabase::MitmDatabase(const GeneratorTable& table) : table_(&table) {
    if (table.size() == 0) throw std::invalid_argument("empty generating set");
    entries_.push_back(Entry{0, 0, 0});
    children_.emplace_back();
    index_.emplace(coset_label(ChannelMatrix::identity(table.gens().n)).digest(), 0);
}

std::size_t MitmDatabase::estimated_bytes(std::size_t level) const {
    constexpr std::size_t per_entry = sizeof(Entry) + 64;
    double total = 1, layer = 1;
    for (std::size_t i = 0; i < level; ++i) {
        layer *= static_cast<double>(table_->size());
        total += layer;
    }
    double bytes = total * per_entry;
    return bytes > 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(bytes);
}

void MitmDatabase::extend_to(std::size_t level, const SearchOptions& opts) {
    if (level <= level_) return;
    if (estimated_bytes(level) > opts.memory_budget)
        throw BudgetError("MITM database of depth " + std::to_string(level) + " needs about " +
                          std::to_string(estimated_bytes(level) >> 20) + " MiB, over the memory budget");
    const int n = table_->gens().n;
    const std::size_t ng = table_->size();
    for (std::size_t depth = level_ + 1; depth <= level; ++depth) {
        // Walk the tree to every entry of length depth-1 carrying T = V^T, then append generators.
        struct Frame {
            std::uint32_t id;
            ChannelMatrix t;
        };
        std::vector<Frame> stack;
        stack.push_back({0, ChannelMatrix::identity(n)});
        while (!stack.empty()) {
            Frame f = std::move(stack.back());
            stack.pop_back();
            const Entry e = entries_[f.id];
            if (e.length + 1 == depth) {
                for (std::size_t g = 0; g < ng; ++g) {
                    if (e.length > 0 && table_->same_generator(e.gen, g)) continue;
                    ChannelMatrix t = mult_generator(table_->rows(g), f.t);
                    Digest128 key = coset_label_of_transpose(t).digest();
                    if (index_.contains(key)) continue;
                    const auto id = static_cast<std::uint32_t>(entries_.size());
                    entries_.push_back(Entry{f.id, static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(depth)});
                    children_.emplace_back();
                    children_[f.id].push_back(id);
                    index_.emplace(key, id);
                }
                continue;
            }
            const auto& kids = children_[f.id];
            for (auto it = kids.rbegin(); it != kids.rend(); ++it)
                stack.push_back({*it, mult_generator(table_->rows(entries_[*it].gen), f.t)});
        }
        level_ = depth;
        report(opts, "mitm database depth " + std::to_string(depth) + ": " + std::to_string(entries_.size()) + " labels");
    }
}

std::optional<std::uint32_t> MitmDatabase::find(const Digest128& d) const {
    auto it = index_.find(d);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> MitmDatabase::word(std::uint32_t id) const {
    std::vector<std::size_t> w;
    while (entries_[id].length > 0) {
        w.push_back(entries_[id].gen);
        id = entries_[id].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
}

namespace {

struct MitmSearch {
    const MitmDatabase& db;
    unsigned c;
    std::size_t best_total;
    std::vector<std::uint32_t> prefix;
    std::optional<std::vector<std::uint32_t>> best_prefix;
    std::uint32_t best_final = 0;
    ChannelMatrix best_trailing;

    void lookup(const ChannelMatrix& x, std::size_t prefix_len) {
        auto id = db.find(coset_label(x).digest());
        if (!id) return;
        const std::size_t total = prefix_len + db.entry(*id).length;
        if (total >= best_total) return;
        // Digest hit: confirm exactly before accepting.
        ChannelMatrix s = strip_word(x, db.word(*id), db.table());
        if (!is_clifford_channel(s)) return;
        best_total = total;
        best_prefix = prefix;
        best_final = *id;
        best_trailing = std::move(s);
    }

    void walk(std::uint32_t node, const ChannelMatrix& y, std::size_t base_len, unsigned piece) {
        for (auto child : db.children(node)) {
            const std::size_t len = base_len + db.entry(child).length;
            if (len >= best_total) continue;
            ChannelMatrix z = mult_generator(db.table().rows(db.entry(child).gen), y);
            prefix.push_back(child);
            search(z, len, piece + 1);
            prefix.pop_back();
            walk(child, z, base_len, piece);
        }
    }

    void search(const ChannelMatrix& x, std::size_t prefix_len, unsigned pieces) {
        lookup(x, prefix_len);
        if (pieces + 1 < c) walk(0, x, prefix_len, pieces);
    }
};

}  // namespace

DecideResult nested_mitm(const ChannelMatrix& u, std::size_t m, unsigned c, MitmDatabase& db, const SearchOptions& opts) {
    if (c < 2) throw std::invalid_argument("nesting level c must be at least 2");
    const GeneratorTable& table = db.table();
    DecideResult res;
    if (is_clifford_channel(u)) {
        res.status = SearchStatus::found;
        res.decomposition = make_decomposition({}, u, table);
        return res;
    }
    if (table.gens().n != u.qubits()) throw std::invalid_argument("generating set does not match input");
    const std::size_t rounds = (m + c - 1) / c;
    for (std::size_t i = 1; i <= rounds; ++i) {
        try {
            db.extend_to(i, opts);
        } catch (const BudgetError& e) {
            res.status = SearchStatus::budget;
            res.message = e.what();
            return res;
        }
        MitmSearch s{db, c, m + 1, {}, std::nullopt, 0, {}};
        s.search(u, 0, 0);
        res.frontier_sizes.push_back(db.size());
        report(opts, "mitm round " + std::to_string(i) + ": database " + std::to_string(db.size()));
        if (s.best_prefix) {
            std::vector<std::size_t> word;
            for (auto id : *s.best_prefix) {
                auto w = db.word(id);
                word.insert(word.end(), w.begin(), w.end());
            }
            auto w = db.word(s.best_final);
            word.insert(word.end(), w.begin(), w.end());
            res.status = SearchStatus::found;
            res.decomposition = make_decomposition(std::move(word), std::move(s.best_trailing), table);
            return res;
        }
    }
    res.status = SearchStatus::exceeds;
    res.message = "Toffoli-count exceeds " + std::to_string(m);
    return res;
}

}  // namespace tof
