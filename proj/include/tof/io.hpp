#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>

#include "json.hpp"
#include "tof/approx_synth.hpp"
#include "tof/channel.hpp"
#include "tof/exact_synth.hpp"
#include "tof/genset.hpp"

namespace tof::io {

using Json = nlohmann::json;

inline constexpr int kGenSetFormatVersion = 1;

// Malformed input. The message names the file, line or field at fault.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Json unitary_to_json(const DenseMatrix& u);
DenseMatrix unitary_from_json(const Json& j);

Json channel_to_json(const ChannelMatrix& m);
ChannelMatrix channel_from_json(const Json& j);

// An input file holds either a unitary or an exact channel.
using Target = std::variant<DenseMatrix, ChannelMatrix>;
Target target_from_json(const Json& j);

Json triple_to_json(const GenTriple& t);
GenTriple triple_from_json(const Json& j, int n);

Json genset_to_json(const GenSet& g);
GenSet genset_from_json(const Json& j);

// Loads <dir>/genset-n<N>-<mode>.json, regenerating it when missing or
// written with another format version. Empty dir disables the cache.
GenSet load_gen_set(int n, GenSetMode mode, const std::filesystem::path& cache_dir);

Json report_to_json(const VerificationReport& r);
Json decomposition_to_json(const Decomposition& d, const VerificationReport& report);
Json approx_to_json(const ApproxResult& r, const VerificationReport& report);

// Word triples plus a trailing circuit or channel, as read from a decomposition file.
struct LoadedDecomposition {
    int n = 0;
    std::vector<GenTriple> triples;
    std::optional<Circuit> trailing_circuit;
    std::optional<ChannelMatrix> trailing_channel;
};
LoadedDecomposition decomposition_from_json(const Json& j);

}  // namespace tof::io
