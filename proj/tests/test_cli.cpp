#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tof/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
};

const fs::path& work_dir() {
    static const fs::path p = [] {
        fs::path d = fs::temp_directory_path() / ("tof-cli-" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return p;
}

// Runs the CLI with a private cache; stdout and stderr are captured together unless split.
Outcome run(const std::string& args, bool with_stderr = true, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(TOFSYN_PATH) + " -q --cache-dir " + (work_dir() / "cache").string() +
                            " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t k = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), k);
    const int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

std::string write(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string ics_unitary() {
    tof::DenseMatrix u = tof::DenseMatrix::Identity(8, 8);
    u(3, 3) = {0, 1};
    u(7, 7) = {0, 1};
    return write("ics.json", tof::io::unitary_to_json(u).dump());
}

}  // namespace

TEST(Cli, GenSetCounts) {
    EXPECT_EQ(run("gen-set -n 3 --mode canonical --count-only").out, "135\n");
    const Outcome r = run("gen-set -n 2");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("no generators for n<3"), std::string::npos);
}

TEST(Cli, GenSetWritesFile) {
    const std::string out = (work_dir() / "g.json").string();
    EXPECT_EQ(run("gen-set -n 3 --out " + out).code, 0);
    const auto j = tof::io::read_json_file(out);
    EXPECT_EQ(j["triples"].size(), 135u);
}

TEST(Cli, BoundPrintsValues) {
    EXPECT_EQ(run("bound --gen-set-size -n 4").out, "30510\n");
    EXPECT_EQ(run("bound --gen-set-size -n 3").out, "337.5\n");
    EXPECT_EQ(run("bound --gen-set-size --cs -n 2").out, "15\n");
    const Outcome j = run("bound --rotation cRz --theta 0.5 --json", false);
    EXPECT_EQ(j.code, 0);
    EXPECT_EQ(tof::io::Json::parse(j.out)["rotation"]["terms"].size(), 4u);
    EXPECT_EQ(run("bound").code, 2);
}

TEST(Cli, RandomIsDeterministic) {
    const Outcome a = run("random -n 3 --count 5 --seed 7", false);
    const Outcome b = run("random -n 3 --count 5 --seed 7", false);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, run("random -n 3 --count 5 --seed 8", false).out);
}

TEST(Cli, SynthAndVerifyControlledS) {
    const std::string in = ics_unitary();
    const std::string circ = (work_dir() / "ics.circ").string();
    const std::string dec = (work_dir() / "ics.dec.json").string();
    const Outcome s = run("synth " + in + " --engine heuristic --rule A --emit-circuit " + circ + " --out " + dec);
    ASSERT_EQ(s.code, 0) << s.out;
    const auto j = tof::io::read_json_file(dec);
    EXPECT_EQ(j["count"], 3);
    EXPECT_TRUE(j["verified"].get<bool>());
    const Outcome v = run("verify --target " + in + " --circuit " + circ);
    EXPECT_EQ(v.code, 0) << v.out;
    EXPECT_EQ(v.out.rfind("pass", 0), 0u);
    EXPECT_EQ(run("verify --target " + in + " --decomposition " + dec).code, 0);
}

TEST(Cli, VerifyFailsOnWrongCircuit) {
    const std::string in = ics_unitary();
    const std::string circ = write("wrong.circ", "TOF 1 2 3\n");
    EXPECT_EQ(run("verify --target " + in + " --circuit " + circ).code, 1);
}

TEST(Cli, DecideAnswers) {
    const std::string in = ics_unitary();
    EXPECT_EQ(run("decide " + in + " -m 2 --engine mitm", false).out, "NO\n");
    const Outcome yes = run("decide " + in + " -m 3 --engine mitm", false);
    EXPECT_EQ(yes.code, 0);
    EXPECT_EQ(yes.out.rfind("YES\n", 0), 0u);
}

TEST(Cli, TGateRejectedByExactEngines) {
    tof::DenseMatrix t = tof::DenseMatrix::Identity(8, 8);
    for (int i = 4; i < 8; ++i) t(i, i) = std::polar(1.0, M_PI / 4);
    const std::string in = write("t.json", tof::io::unitary_to_json(t).dump());
    for (const char* engine : {"mitm", "heuristic"}) {
        const Outcome r = run(std::string("synth ") + in + " --engine " + engine);
        EXPECT_EQ(r.code, 1);
        EXPECT_NE(r.out.find("not exactly implementable"), std::string::npos) << r.out;
        EXPECT_NE(r.out.find("entry not in Z[1/2]"), std::string::npos);
    }
}

TEST(Cli, ApproxOnClifford) {
    tof::DenseMatrix h = tof::DenseMatrix::Identity(8, 8);
    const double s = 1 / std::sqrt(2.0);
    h.setZero();
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            if ((r & 3) == (c & 3)) h(r, c) = ((r >> 2) & (c >> 2)) ? -s : s;
    const std::string in = write("h.json", tof::io::unitary_to_json(h).dump());
    const Outcome r = run("synth " + in + " --engine approx --eps 1e-6", false);
    ASSERT_EQ(r.code, 0);
    const auto j = tof::io::Json::parse(r.out);
    EXPECT_EQ(j["count"], 0);
    EXPECT_TRUE(j["verified"].get<bool>());
}

TEST(Cli, MalformedInputReportsField) {
    const std::string in = write("bad.json", R"({"n": 3, "entries": [[1, 0]]})");
    const Outcome r = run("synth " + in);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("channel.entries"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("synth").code, 2);
    EXPECT_EQ(run("gen-set -n 3 --mode nonsense").code, 2);
}

TEST(Cli, BudgetExitCode) {
    const Outcome r = run("random -n 3 --count 4 --seed 2", false);
    const std::string in = write("r4.json", r.out);
    EXPECT_EQ(run("synth " + in + " --engine mitm --max-count 2").code, 3);
}

TEST(Cli, ConfigFileAndEnvironment) {
    const std::string cfg = write("cfg.json", R"({"mode": "paper-compat", "n": 4})");
    EXPECT_EQ(run("--config " + cfg + " gen-set --count-only").out, "7024\n");
    // Command-line flags win over the file.
    EXPECT_EQ(run("--config " + cfg + " gen-set -n 3 --mode canonical --count-only").out, "135\n");
    EXPECT_EQ(run("gen-set --count-only", true, "TOFSYN_CONFIG=" + cfg).out, "7024\n");
    const std::string bad = write("badcfg.json", R"({"colour": 1})");
    EXPECT_EQ(run("--config " + bad + " gen-set --count-only").code, 2);
}
