#include <gtest/gtest.h>

#include <filesystem>

#include "tof/io.hpp"

using namespace tof;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("tof-io-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Io, UnitaryRoundTrip) {
    Rng rng(1);
    const DenseMatrix u = circuit_to_unitary(random_clifford_circuit(2, rng));
    const DenseMatrix back = io::unitary_from_json(io::Json::parse(io::unitary_to_json(u).dump()));
    EXPECT_LT((u - back).norm(), 1e-15);
}

TEST(Io, ChannelRoundTrip) {
    const GenSet g = generate_gen_set(3);
    const ChannelMatrix m = mult_generator(chan_rep_generator(g.triples[2]), chan_rep_generator(g.triples[8]).expand());
    EXPECT_EQ(io::channel_from_json(io::channel_to_json(m)), m);
    const io::Json j = io::channel_to_json(m);
    EXPECT_EQ(j["entries"].size(), 64u * 64u);
    EXPECT_EQ(j["entries"][0].size(), 2u);
}

TEST(Io, GenSetRoundTrip) {
    const GenSet g = generate_gen_set(3, GenSetMode::paper_compat);
    const GenSet back = io::genset_from_json(io::genset_to_json(g));
    EXPECT_EQ(back.triples, g.triples);
    EXPECT_EQ(back.mode, g.mode);
}

TEST(Io, FieldDiagnostics) {
    EXPECT_NE(message_of([] { io::unitary_from_json(io::Json::parse(R"({"n": 1, "matrix": [[[1,0],[0,0]],[[0,0]]]})")); })
                  .find("unitary.matrix[1]"),
              std::string::npos);
    EXPECT_NE(message_of([] { io::channel_from_json(io::Json::parse(R"({"n": 1})")); }).find("entries"), std::string::npos);
    EXPECT_NE(message_of([] { io::triple_from_json(io::Json::parse(R"(["IIZ","IIX","ZII"])"), 3); }).find("triple"),
              std::string::npos);
    EXPECT_THROW(io::target_from_json(io::Json::parse("{}")), io::FormatError);
}

TEST(Io, JsonSyntaxErrorsNameTheLine) {
    const fs::path dir = temp_dir("syntax");
    io::write_text_file(dir / "bad.json", "{\n  \"n\": 3,\n  \"matrix\": [1,\n}\n");
    const std::string msg = message_of([&] { io::read_json_file(dir / "bad.json"); });
    EXPECT_NE(msg.find("bad.json:4"), std::string::npos) << msg;
    fs::remove_all(dir);
}

TEST(Io, GenSetCacheRegeneratesOnVersionMismatch) {
    const fs::path dir = temp_dir("cache");
    const GenSet a = io::load_gen_set(3, GenSetMode::canonical, dir);
    const fs::path file = dir / "genset-n3-canonical.json";
    ASSERT_TRUE(fs::exists(file));
    io::Json j = io::read_json_file(file);
    EXPECT_EQ(j["format_version"], io::kGenSetFormatVersion);
    j["format_version"] = 999;
    j["triples"] = io::Json::array();
    io::write_text_file(file, j.dump());
    const GenSet b = io::load_gen_set(3, GenSetMode::canonical, dir);
    EXPECT_EQ(b.triples, a.triples);
    EXPECT_EQ(io::read_json_file(file)["format_version"], io::kGenSetFormatVersion);
    fs::remove_all(dir);
}

TEST(Io, DecompositionRoundTrip) {
    const GenSet g = generate_gen_set(3);
    Decomposition d;
    d.word = {1, 2};
    d.triples = {g.triples[1], g.triples[2]};
    d.trailing = ChannelMatrix::identity(3);
    VerificationReport rep;
    rep.pass = true;
    rep.mode = "exact";
    const io::Json j = io::decomposition_to_json(d, rep);
    EXPECT_EQ(j["count"], 2);
    EXPECT_TRUE(j["verified"].get<bool>());
    const io::LoadedDecomposition back = io::decomposition_from_json(j);
    EXPECT_EQ(back.triples, d.triples);
    ASSERT_TRUE(back.trailing_channel.has_value());
    EXPECT_EQ(*back.trailing_channel, d.trailing);
}
