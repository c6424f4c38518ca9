#include "tof/io.hpp"

#include <fstream>
#include <sstream>

namespace tof::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw FormatError(where + ": " + what); }

const Json& field(const Json& j, const char* name, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) fail(where, std::string("missing field '") + name + "'");
    return *it;
}

int read_n(const Json& j, const std::string& where) {
    const Json& n = field(j, "n", where);
    if (!n.is_number_integer() || n.get<int>() < 1 || n.get<int>() > kMaxQubits) fail(where + ".n", "expected a qubit count");
    return n.get<int>();
}

double read_double(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

Pauli read_pauli(const Json& j, int n, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a Pauli string");
    Pauli p;
    try {
        p = Pauli::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    if (p.n != n) fail(where, "Pauli string has " + std::to_string(p.n) + " qubits, expected " + std::to_string(n));
    return p;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot write file");
    out << text;
}

Json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // Byte offset to line number.
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw FormatError(path.string() + ":" + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
    }
}

Json unitary_to_json(const DenseMatrix& u) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < u.cols(); ++c) row.push_back({u(r, c).real(), u(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return {{"n", qubits_of_dimension(u.rows())}, {"matrix", std::move(rows)}};
}

DenseMatrix unitary_from_json(const Json& j) {
    const int n = read_n(j, "unitary");
    if (n > kDenseLimit) fail("unitary.n", "too many qubits for a dense matrix");
    const Json& m = field(j, "matrix", "unitary");
    const Eigen::Index d = Eigen::Index{1} << n;
    if (!m.is_array() || static_cast<Eigen::Index>(m.size()) != d)
        fail("unitary.matrix", "expected " + std::to_string(d) + " rows");
    DenseMatrix u(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        const Json& row = m[static_cast<std::size_t>(r)];
        const std::string wr = "unitary.matrix[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) fail(wr, "expected " + std::to_string(d) + " entries");
        for (Eigen::Index c = 0; c < d; ++c) {
            const Json& e = row[static_cast<std::size_t>(c)];
            const std::string we = wr + "[" + std::to_string(c) + "]";
            if (e.is_number()) {
                u(r, c) = {e.get<double>(), 0.0};
            } else {
                if (!e.is_array() || e.size() != 2) fail(we, "expected [re, im]");
                u(r, c) = {read_double(e[0], we + "[0]"), read_double(e[1], we + "[1]")};
            }
        }
    }
    return u;
}

Json channel_to_json(const ChannelMatrix& m) {
    Json entries = Json::array();
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c) {
            const Dyadic e = m.entry(r, c);
            entries.push_back({static_cast<std::int64_t>(e.numerator()), e.exponent()});
        }
    return {{"n", m.qubits()}, {"entries", std::move(entries)}};
}

ChannelMatrix channel_from_json(const Json& j) {
    const int n = read_n(j, "channel");
    if (n > kChannelLimit) fail("channel.n", "channel matrices support at most " + std::to_string(kChannelLimit) + " qubits");
    const Json& e = field(j, "entries", "channel");
    const std::size_t dim = std::size_t{1} << (2 * n);
    if (!e.is_array() || e.size() != dim * dim)
        fail("channel.entries", "expected " + std::to_string(dim * dim) + " [a, k] pairs");
    std::vector<Dyadic> vals;
    vals.reserve(dim * dim);
    for (std::size_t i = 0; i < e.size(); ++i) {
        const std::string w = "channel.entries[" + std::to_string(i) + "]";
        const Json& p = e[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
            fail(w, "expected an integer pair [a, k]");
        const long long k = p[1].get<long long>();
        if (k < 0 || k > 62) fail(w, "exponent out of range");
        vals.emplace_back(BigInt(p[0].get<long long>()), static_cast<unsigned>(k));
    }
    try {
        return ChannelMatrix::from_dyadics(n, vals);
    } catch (const std::exception& ex) {
        fail("channel.entries", ex.what());
    }
}

Target target_from_json(const Json& j) {
    if (j.is_object() && j.contains("entries")) return channel_from_json(j);
    if (j.is_object() && j.contains("matrix")) return unitary_from_json(j);
    fail("input", "expected a unitary ('matrix') or a channel ('entries')");
}

Json triple_to_json(const GenTriple& t) { return {t.p1.str(), t.p2.str(), t.p3.str()}; }

GenTriple triple_from_json(const Json& j, int n) {
    if (!j.is_array() || j.size() != 3) fail("triple", "expected three Pauli strings");
    GenTriple t{read_pauli(j[0], n, "triple[0]"), read_pauli(j[1], n, "triple[1]"), read_pauli(j[2], n, "triple[2]")};
    try {
        validate_triple(t.p1, t.p2, t.p3);
    } catch (const std::exception& e) {
        fail("triple " + t.str(), e.what());
    }
    return t;
}

Json genset_to_json(const GenSet& g) {
    Json triples = Json::array();
    for (const auto& t : g.triples) triples.push_back(triple_to_json(t));
    return {{"format_version", kGenSetFormatVersion}, {"n", g.n}, {"mode", mode_name(g.mode)}, {"triples", std::move(triples)}};
}

GenSet genset_from_json(const Json& j) {
    GenSet g;
    g.n = read_n(j, "genset");
    const Json& v = field(j, "format_version", "genset");
    if (!v.is_number_integer() || v.get<int>() != kGenSetFormatVersion) fail("genset.format_version", "unsupported version");
    const Json& mode = field(j, "mode", "genset");
    if (!mode.is_string()) fail("genset.mode", "expected a string");
    try {
        g.mode = parse_mode(mode.get<std::string>());
    } catch (const std::exception& e) {
        fail("genset.mode", e.what());
    }
    const Json& ts = field(j, "triples", "genset");
    if (!ts.is_array()) fail("genset.triples", "expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        try {
            g.triples.push_back(triple_from_json(ts[i], g.n));
        } catch (const FormatError& e) {
            fail("genset.triples[" + std::to_string(i) + "]", e.what());
        }
    }
    return g;
}

GenSet load_gen_set(int n, GenSetMode mode, const std::filesystem::path& cache_dir) {
    if (cache_dir.empty()) return generate_gen_set(n, mode);
    const auto path = cache_dir / ("genset-n" + std::to_string(n) + "-" + mode_name(mode) + ".json");
    if (std::filesystem::exists(path)) {
        try {
            GenSet g = genset_from_json(read_json_file(path));
            if (g.n == n && g.mode == mode) return g;
        } catch (const FormatError&) {
            // stale or damaged; regenerate below
        }
    }
    GenSet g = generate_gen_set(n, mode);
    std::filesystem::create_directories(cache_dir);
    write_text_file(path, genset_to_json(g).dump() + "\n");
    return g;
}

Json report_to_json(const VerificationReport& r) {
    return {{"pass", r.pass}, {"mode", r.mode}, {"distance", r.distance}, {"detail", r.detail}};
}

Json decomposition_to_json(const Decomposition& d, const VerificationReport& report) {
    Json word = Json::array();
    for (const auto& t : d.triples) word.push_back(triple_to_json(t));
    return {{"n", d.trailing.qubits()},
            {"count", d.count()},
            {"word", std::move(word)},
            {"trailing_clifford_channel", channel_to_json(d.trailing)},
            {"verified", report.pass},
            {"verification", report_to_json(report)}};
}

Json approx_to_json(const ApproxResult& r, const VerificationReport& report) {
    Json word = Json::array();
    for (const auto& t : r.triples) word.push_back(triple_to_json(t));
    return {{"n", r.trailing.circuit.n},
            {"count", r.count},
            {"epsilon", r.epsilon},
            {"achieved_distance", r.achieved_distance},
            {"word", std::move(word)},
            {"trailing_circuit", r.trailing.circuit.str()},
            {"verified", report.pass},
            {"verification", report_to_json(report)}};
}

LoadedDecomposition decomposition_from_json(const Json& j) {
    LoadedDecomposition out;
    const Json& w = field(j, "word", "decomposition");
    if (!w.is_array()) fail("decomposition.word", "expected an array");
    if (j.contains("n")) {
        out.n = read_n(j, "decomposition");
    } else if (!w.empty() && w[0].is_array() && !w[0].empty() && w[0][0].is_string()) {
        out.n = static_cast<int>(w[0][0].get<std::string>().size());
    }
    if (j.contains("trailing_clifford_channel")) {
        out.trailing_channel = channel_from_json(j["trailing_clifford_channel"]);
        if (out.n == 0) out.n = out.trailing_channel->qubits();
    }
    if (j.contains("trailing_circuit")) {
        const Json& c = j["trailing_circuit"];
        if (!c.is_string()) fail("decomposition.trailing_circuit", "expected circuit text");
        try {
            out.trailing_circuit = Circuit::parse(c.get<std::string>(), out.n);
        } catch (const std::exception& e) {
            fail("decomposition.trailing_circuit", e.what());
        }
        if (out.n == 0) out.n = out.trailing_circuit->n;
    }
    if (!out.trailing_channel && !out.trailing_circuit)
        fail("decomposition", "missing 'trailing_clifford_channel' or 'trailing_circuit'");
    for (std::size_t i = 0; i < w.size(); ++i) {
        try {
            out.triples.push_back(triple_from_json(w[i], out.n));
        } catch (const FormatError& e) {
            fail("decomposition.word[" + std::to_string(i) + "]", e.what());
        }
    }
    return out;
}

}  // namespace tof::io
