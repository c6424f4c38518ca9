// tofsyn: Toffoli-count synthesis over Clifford+Toffoli.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tof/approx_synth.hpp"
#include "tof/bounds.hpp"
#include "tof/exact_synth.hpp"
#include "tof/io.hpp"
#include "tof/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace tof;
using io::Json;

namespace {

enum Exit { kOk = 0, kNo = 1, kUsage = 2, kBudget = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    int n = 3;
    std::string mode = "canonical";
    std::string rule = "A";
    double eps = 1e-6;
    std::size_t max_count = 0;  // 0: engine default
    unsigned nesting = 2;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::size_t memory_mb = 2048;
    std::string cache_dir;
    std::string backend = "auto";
    bool quiet = false;
};

std::string default_cache_dir() {
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return (fs::path(x) / "tofsyn").string();
    if (const char* h = std::getenv("HOME"); h && *h) return (fs::path(h) / ".cache" / "tofsyn").string();
    return {};
}

// Values from the config file apply only where the command line is silent.
void apply_config(const fs::path& path, Config& cfg, const CLI::App& app) {
    const Json j = io::read_json_file(path);
    if (!j.is_object()) throw io::FormatError(path.string() + ": config must be a JSON object");
    auto given = [&](const std::string& flag) {
        for (const CLI::App* a : {&app}) {
            for (const auto* sub : a->get_subcommands())
                if (auto* o = sub->get_option_no_throw(flag); o && o->count() > 0) return true;
            if (auto* o = a->get_option_no_throw(flag); o && o->count() > 0) return true;
        }
        return false;
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const Json& v = it.value();
        const std::string where = path.string() + ": field '" + k + "'";
        try {
            if (k == "n") { if (!given("-n")) cfg.n = v.get<int>(); }
            else if (k == "mode") { if (!given("--mode")) cfg.mode = v.get<std::string>(); }
            else if (k == "rule") { if (!given("--rule")) cfg.rule = v.get<std::string>(); }
            else if (k == "eps") { if (!given("--eps")) cfg.eps = v.get<double>(); }
            else if (k == "max_count") { if (!given("--max-count")) cfg.max_count = v.get<std::size_t>(); }
            else if (k == "nesting") { if (!given("--nesting")) cfg.nesting = v.get<unsigned>(); }
            else if (k == "seed") { if (!given("--seed")) cfg.seed = v.get<std::uint64_t>(); }
            else if (k == "workers") { if (!given("--workers")) cfg.workers = v.get<unsigned>(); }
            else if (k == "memory_budget_mb") { if (!given("--memory-budget")) cfg.memory_mb = v.get<std::size_t>(); }
            else if (k == "cache_dir") { if (!given("--cache-dir")) cfg.cache_dir = v.get<std::string>(); }
            else if (k == "backend") { if (!given("--backend")) cfg.backend = v.get<std::string>(); }
            else throw io::FormatError(where + ": unknown key");
        } catch (const Json::exception&) {
            throw io::FormatError(where + ": wrong type");
        }
    }
}

void validate(const Config& cfg) {
    if (cfg.n < 1 || cfg.n > kChannelLimit) throw UsageError("-n must be in 1.." + std::to_string(kChannelLimit));
    if (cfg.rule != "A" && cfg.rule != "B") throw UsageError("--rule must be A or B");
    if (!(cfg.eps > 0) || cfg.eps >= 1) throw UsageError("--eps must be in (0, 1)");
    if (cfg.nesting < 1) throw UsageError("--nesting must be at least 1");
    if (cfg.workers < 1) throw UsageError("--workers must be at least 1");
    if (cfg.backend != "auto" && cfg.backend != "scalar" && cfg.backend != "avx2")
        throw UsageError("--backend must be auto, scalar or avx2");
    try {
        parse_mode(cfg.mode);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

SearchOptions search_options(const Config& cfg) {
    SearchOptions o;
    o.workers = cfg.workers;
    o.memory_budget = cfg.memory_mb << 20;
    if (!cfg.quiet) o.progress = [](const std::string& s) { std::cerr << s << "\n"; };
    return o;
}

GenSet gens_for(int n, const Config& cfg) { return io::load_gen_set(n, parse_mode(cfg.mode), cfg.cache_dir); }

void write_output(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") std::cout << text;
    else io::write_text_file(out, text);
}

// Exact channel for an exact engine; unitaries must pass the dyadic snap.
ChannelMatrix exact_target(const io::Target& t) {
    if (auto* c = std::get_if<ChannelMatrix>(&t)) return *c;
    const auto& u = std::get<DenseMatrix>(t);
    try {
        return snap_to_dyadic(chan_rep_unitary(u));
    } catch (const RingError& e) {
        throw RingError(std::string("not exactly implementable: ") + e.what());
    }
}

int report_exact(const ChannelMatrix& u, const Decomposition& d, const std::string& out, const std::string& circuit_out) {
    VerificationReport rep = verify_decomposition(u, d.triples, d.trailing);
    // Signed column permutations from random benchmarks need not be Clifford channels.
    std::optional<Circuit> trailing;
    try {
        trailing = clifford_from_channel(d.trailing);
    } catch (const std::invalid_argument&) {
    }
    if (rep.pass && trailing) {
        // Cross-check the Clifford circuit that will be emitted.
        const VerificationReport rc = verify_decomposition(u, d.triples, *trailing);
        if (!rc.pass) rep = rc;
    }
    Json j = io::decomposition_to_json(d, rep);
    if (trailing) j["trailing_circuit"] = trailing->str();
    write_output(out, j.dump(2) + "\n");
    if (!circuit_out.empty()) {
        if (!trailing) {
            std::cerr << "error: trailing signed permutation is not a Clifford channel; no circuit written\n";
            return kNo;
        }
        io::write_text_file(circuit_out, decomposition_circuit(d.triples, *trailing).str());
    }
    return rep.pass ? kOk : kNo;
}

std::size_t default_max(const std::string& engine) { return engine == "approx" ? 2 : engine == "mitm" ? 6 : 12; }

int run_synth(const Config& cfg, const std::string& input, const std::string& engine, const std::string& out,
              const std::string& circuit_out) {
    const io::Target target = io::target_from_json(io::read_json_file(input));
    const std::size_t max_count = cfg.max_count ? cfg.max_count : default_max(engine);
    const SearchOptions opts = search_options(cfg);
    if (engine == "approx") {
        const auto* w = std::get_if<DenseMatrix>(&target);
        if (!w) throw UsageError("the approx engine needs a unitary input");
        const int n = qubits_of_dimension(w->rows());
        const DenseGeneratorTable table(gens_for(n, cfg));
        ApproxOptions ao;
        ao.workers = cfg.workers;
        const ApproxResult r = approx_tof_opt(*w, cfg.eps, table, max_count, ao);
        const VerificationReport rep = verify_decomposition(*w, r.triples, r.trailing.circuit, cfg.eps + kBandSlack);
        write_output(out, io::approx_to_json(r, rep).dump(2) + "\n");
        if (!circuit_out.empty())
            io::write_text_file(circuit_out, decomposition_circuit(r.triples, r.trailing.circuit).str());
        return rep.pass ? kOk : kNo;
    }
    const ChannelMatrix u = exact_target(target);
    const GeneratorTable table(gens_for(u.qubits(), cfg));
    if (engine == "heuristic") {
        const Rule rule = cfg.rule == "A" ? Rule::A : Rule::B;
        const OptResult r = exact_tof_opt(u, rule, table, max_count, opts);
        switch (r.status) {
            case SearchStatus::found: return report_exact(u, *r.decomposition, out, circuit_out);
            case SearchStatus::exhausted:
                std::cout << "undecided: heuristic pruned every candidate at m=" << r.last_m
                          << "; this does not prove a larger count, try --engine mitm\n";
                return kNo;
            case SearchStatus::exceeds:
            case SearchStatus::budget:
                std::cerr << "exceeded budget: " << r.message << "\n";
                return kBudget;
        }
    }
    if (engine == "mitm") {
        MitmDatabase db(table);
        for (std::size_t m = matrix_sde(u); m <= max_count; ++m) {
            const DecideResult r = nested_mitm(u, m, cfg.nesting, db, opts);
            if (r.status == SearchStatus::found) return report_exact(u, *r.decomposition, out, circuit_out);
            if (r.status == SearchStatus::budget) throw BudgetError(r.message);
        }
        throw BudgetError("no decomposition with count <= " + std::to_string(max_count));
    }
    throw UsageError("unknown engine '" + engine + "'");
}

int run_decide(const Config& cfg, const std::string& input, const std::string& engine, std::size_t m,
               const std::string& out) {
    const ChannelMatrix u = exact_target(io::target_from_json(io::read_json_file(input)));
    const GeneratorTable table(gens_for(u.qubits(), cfg));
    const SearchOptions opts = search_options(cfg);
    DecideResult r;
    if (engine == "heuristic") {
        r = exact_tof_decide(u, m, cfg.rule == "A" ? Rule::A : Rule::B, table, opts);
    } else if (engine == "mitm") {
        MitmDatabase db(table);
        r = nested_mitm(u, m, cfg.nesting, db, opts);
    } else {
        throw UsageError("decide supports the heuristic and mitm engines");
    }
    switch (r.status) {
        case SearchStatus::found:
            std::cout << "YES\n";
            return report_exact(u, *r.decomposition, out, "") == kOk ? kOk : kNo;
        case SearchStatus::exceeds: std::cout << "NO\n"; return kNo;
        case SearchStatus::exhausted: std::cout << "UNDECIDED\n"; return kNo;
        case SearchStatus::budget: std::cerr << "exceeded budget: " << r.message << "\n"; return kBudget;
    }
    return kNo;
}

int run_random(const Config& cfg, std::size_t count, const std::string& trailing, const std::string& out) {
    TrailingKind kind;
    if (trailing == "signed-permutation") kind = TrailingKind::signed_permutation;
    else if (trailing == "clifford") kind = TrailingKind::clifford;
    else throw UsageError("--trailing must be signed-permutation or clifford");
    const GenSet gens = gens_for(cfg.n, cfg);
    if (gens.size() == 0 && count > 0) throw UsageError(gens.diagnostic);
    const RandomInstance inst = random_chan_rep(gens, count, cfg.seed, kind);
    Json j = io::channel_to_json(inst.matrix);
    Json word = Json::array();
    for (auto g : inst.word) word.push_back(io::triple_to_json(gens.triples[g]));
    j["tof_in"] = inst.ground_truth;
    j["seed"] = cfg.seed;
    j["word"] = std::move(word);
    if (inst.trailing_circuit) j["trailing_circuit"] = inst.trailing_circuit->str();
    else j["trailing_clifford_channel"] = io::channel_to_json(inst.trailing);
    write_output(out, j.dump() + "\n");
    return kOk;
}

int run_verify(const std::string& target_file, const std::string& circuit_file, const std::string& decomp_file,
               double threshold) {
    if (circuit_file.empty() == decomp_file.empty()) throw UsageError("give exactly one of --circuit or --decomposition");
    const io::Target target = io::target_from_json(io::read_json_file(target_file));
    VerificationReport rep;
    if (!circuit_file.empty()) {
        const Circuit c = Circuit::parse(io::read_text_file(circuit_file));
        if (const auto* u = std::get_if<DenseMatrix>(&target)) {
            rep = verify_decomposition(*u, {}, c, threshold);
        } else {
            const auto& ch = std::get<ChannelMatrix>(target);
            if (c.n != ch.qubits()) throw UsageError("circuit width does not match the target");
            rep.mode = "exact";
            const ChannelMatrix got = snap_to_dyadic(chan_rep_unitary(circuit_to_unitary(c)));
            rep.pass = got == ch;
            rep.distance = rep.pass ? 0.0 : 1.0;
            rep.detail = rep.pass ? "channel matrices equal" : "channel matrices differ";
        }
    } else {
        const io::LoadedDecomposition d = io::decomposition_from_json(io::read_json_file(decomp_file));
        if (const auto* u = std::get_if<DenseMatrix>(&target)) {
            const Circuit trailing = d.trailing_circuit ? *d.trailing_circuit : clifford_from_channel(*d.trailing_channel);
            rep = verify_decomposition(*u, d.triples, trailing, threshold);
        } else {
            const auto& ch = std::get<ChannelMatrix>(target);
            rep = d.trailing_channel ? verify_decomposition(ch, d.triples, *d.trailing_channel)
                                     : verify_decomposition(ch, d.triples, *d.trailing_circuit);
        }
    }
    std::ostringstream ss;
    ss.precision(3);
    ss << (rep.pass ? "pass" : "fail") << " (" << rep.mode << ") distance=" << std::scientific << rep.distance << " "
       << rep.detail << "\n";
    std::cout << ss.str();
    return rep.pass ? kOk : kNo;
}

struct BoundArgs {
    bool gen_set_size = false, cs = false, lower_approx = false, lower_exact = false, json = false;
    double alpha = 0, m = 0, eps = 0, c = 1;
    std::string rotation;
    double theta = 0;
};

int run_bound(const Config& cfg, const BoundArgs& b, bool n_given) {
    std::vector<std::pair<std::string, std::string>> rows;
    Json j = Json::object();
    if (b.gen_set_size) {
        if (!n_given) throw UsageError("--gen-set-size needs -n");
        const std::string v = format_rational(b.cs ? gen_set_bound_cs(cfg.n) : gen_set_bound_tof(cfg.n));
        const std::string key = b.cs ? "gen_set_size_cs" : "gen_set_size_tof";
        rows.emplace_back(key, v);
        j[key] = v;
    }
    auto dbl = [](double v) {
        std::ostringstream s;
        s.precision(10);
        s << v;
        return s.str();
    };
    if (b.lower_approx) {
        const double v = lower_bound_approx(b.alpha, b.m, b.eps, b.c);
        rows.emplace_back("lower_bound_approx", dbl(v));
        j["lower_bound_approx"] = v;
    }
    if (b.lower_exact) {
        const double v = lower_bound_exact(b.alpha, b.m, b.c);
        rows.emplace_back("lower_bound_exact", dbl(v));
        j["lower_bound_exact"] = v;
    }
    if (!b.rotation.empty()) {
        const RotationKind k = parse_rotation(b.rotation);
        Json terms = Json::array();
        for (const auto& t : rotation_expansion(k, b.theta)) {
            std::ostringstream s;
            s.precision(12);
            s << t.coefficient.real() << (t.coefficient.imag() < 0 ? "-" : "+") << std::abs(t.coefficient.imag()) << "i  "
              << t.symbolic;
            rows.emplace_back(t.pauli.str(), s.str());
            terms.push_back({{"pauli", t.pauli.str()},
                             {"re", t.coefficient.real()},
                             {"im", t.coefficient.imag()},
                             {"symbolic", t.symbolic}});
        }
        j["rotation"] = {{"kind", rotation_name(k)}, {"theta", b.theta}, {"terms", std::move(terms)}};
    }
    if (rows.empty()) throw UsageError("nothing requested; see bound --help");
    if (b.json) {
        std::cout << j.dump(2) << "\n";
    } else if (rows.size() == 1 && b.rotation.empty()) {
        std::cout << rows[0].second << "\n";
    } else {
        for (const auto& [k, v] : rows) std::cout << k << "  " << v << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toffoli-count synthesis over Clifford+Toffoli"};
    app.require_subcommand(1);
    Config cfg;
    cfg.cache_dir = default_cache_dir();
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (TOFSYN_CONFIG sets the default path)");
    app.add_option("--workers", cfg.workers, "worker threads for the searches");
    app.add_option("--cache-dir", cfg.cache_dir, "generating-set cache directory, empty to disable");
    app.add_option("--memory-budget", cfg.memory_mb, "search memory budget in MiB");
    app.add_option("--backend", cfg.backend, "kernel backend: auto, scalar, avx2");
    app.add_flag("-q,--quiet", cfg.quiet, "no progress output on stderr");

    auto* gen = app.add_subcommand("gen-set", "generate the Toffoli generating set");
    bool count_only = false;
    std::string gen_out;
    gen->add_option("-n", cfg.n, "qubits");
    gen->add_option("--mode", cfg.mode, "canonical or paper-compat");
    gen->add_flag("--count-only", count_only, "print the cardinality only");
    gen->add_option("--out", gen_out, "also write the set to this file");

    auto* synth = app.add_subcommand("synth", "find a Toffoli-count decomposition");
    std::string input, engine = "heuristic", out, circuit_out;
    synth->add_option("input", input, "unitary or channel JSON")->required();
    synth->add_option("--engine", engine, "heuristic, mitm or approx");
    synth->add_option("--rule", cfg.rule, "heuristic pruning rule A or B");
    synth->add_option("--eps", cfg.eps, "approximation tolerance");
    synth->add_option("--max-count", cfg.max_count, "largest count to try");
    synth->add_option("--nesting", cfg.nesting, "meet-in-the-middle nesting depth c");
    synth->add_option("--mode", cfg.mode, "generating-set mode");
    synth->add_option("--out", out, "decomposition JSON output (default stdout)");
    synth->add_option("--emit-circuit", circuit_out, "write the full circuit here");

    auto* decide = app.add_subcommand("decide", "decide whether the count is at most m");
    std::size_t decide_m = 0;
    std::string decide_engine = "heuristic", decide_input, decide_out;
    decide->add_option("input", decide_input, "unitary or channel JSON")->required();
    decide->add_option("--count,-m", decide_m, "m")->required();
    decide->add_option("--engine", decide_engine, "heuristic or mitm");
    decide->add_option("--rule", cfg.rule, "heuristic pruning rule A or B");
    decide->add_option("--nesting", cfg.nesting, "meet-in-the-middle nesting depth c");
    decide->add_option("--mode", cfg.mode, "generating-set mode");
    decide->add_option("--out", decide_out, "decomposition JSON output (default stdout)");

    auto* random = app.add_subcommand("random", "random channel with a known word");
    std::size_t tof_in = 1;
    std::string trailing = "signed-permutation", random_out;
    random->add_option("-n", cfg.n, "qubits");
    random->add_option("--count", tof_in, "number of generators");
    random->add_option("--seed", cfg.seed, "seed");
    random->add_option("--trailing", trailing, "signed-permutation or clifford");
    random->add_option("--mode", cfg.mode, "generating-set mode");
    random->add_option("--out", random_out, "output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "check a circuit or decomposition against a target");
    std::string target_file, circuit_file, decomp_file;
    double threshold = kVerifyThreshold;
    verify->add_option("--target", target_file, "unitary or channel JSON")->required();
    verify->add_option("--circuit", circuit_file, "circuit text file");
    verify->add_option("--decomposition", decomp_file, "decomposition JSON");
    verify->add_option("--threshold", threshold, "distance threshold for unitary targets");

    auto* bound = app.add_subcommand("bound", "evaluate size and count bounds");
    BoundArgs ba;
    auto* bound_n = bound->add_option("-n", cfg.n, "qubits");
    bound->add_flag("--gen-set-size", ba.gen_set_size, "upper bound on the generating-set size");
    bound->add_flag("--cs", ba.cs, "use the Clifford+CS bound");
    bound->add_flag("--lower-approx", ba.lower_approx, "lower bound on the approximate count");
    bound->add_flag("--lower-exact", ba.lower_exact, "lower bound on the exact count");
    bound->add_option("--alpha", ba.alpha, "max coefficient magnitude");
    bound->add_option("--M", ba.m, "number of nonzero coefficients");
    bound->add_option("--eps", ba.eps, "tolerance");
    bound->add_option("--c", ba.c, "constant in the lower bounds");
    bound->add_option("--rotation", ba.rotation, "Rz, cRz, cRn, Givens, ccRn, ccRz");
    bound->add_option("--theta", ba.theta, "rotation angle");
    bound->add_flag("--json", ba.json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (config_path.empty())
            if (const char* env = std::getenv("TOFSYN_CONFIG"); env && *env) config_path = env;
        if (!config_path.empty()) apply_config(config_path, cfg, app);
        validate(cfg);
        if (cfg.backend == "scalar") simd::set_backend(simd::Backend::scalar);
        else if (cfg.backend == "avx2" && !simd::set_backend(simd::Backend::avx2))
            throw UsageError("avx2 backend not available on this machine");

        if (gen->parsed()) {
            if (cfg.n < 3) throw UsageError("no generators for n<3");
            const GenSet g = gens_for(cfg.n, cfg);
            if (!gen_out.empty()) io::write_text_file(gen_out, io::genset_to_json(g).dump(1) + "\n");
            std::cout << g.size() << "\n";
            return kOk;
        }
        if (synth->parsed()) return run_synth(cfg, input, engine, out, circuit_out);
        if (decide->parsed()) return run_decide(cfg, decide_input, decide_engine, decide_m, decide_out);
        if (random->parsed()) return run_random(cfg, tof_in, trailing, random_out);
        if (verify->parsed()) return run_verify(target_file, circuit_file, decomp_file, threshold);
        if (bound->parsed()) return run_bound(cfg, ba, bound_n->count() > 0);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const io::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const BudgetError& e) {
        std::cerr << "exceeded budget: " << e.what() << "\n";
        return kBudget;
    } catch (const RingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNo;
    }
    return kUsage;
}
