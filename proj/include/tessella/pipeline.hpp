#pragma once

#include "tessella/io.hpp"
#include "tessella/repcount.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tessella {

constexpr const char* kToolVersion = "0.3.0";

// Exit codes shared by every subcommand.
enum ExitCode : int { kExitPass = 0, kExitVerifyFail = 2, kExitNoChoice = 3, kExitInput = 4 };

int exit_code_for(ErrorKind kind);

struct PipelineConfig {
    std::string tiling_path;
    std::string automorphism_path;
    std::optional<std::string> psi_config_path;
    std::optional<std::string> script_path;
    std::string psi_mode = "certificate";
    std::vector<std::string> dimer;      // arrow names; empty = equivariant_dimer
    std::vector<std::string> generators; // with `bases`, overrides the choice search
    std::vector<std::string> bases;
    std::vector<std::string> tree;
    std::string basepoint;
    int max_conjugates = 8;
    std::vector<std::uint32_t> fields{2, 3};
    std::vector<int> dims{1};
    std::uint64_t sample = 0;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out_dir;
};

// Throws InvalidInput describing the first problem.
void validate_config(const PipelineConfig& config);

struct StageOutcome {
    std::string name;
    std::string outcome; // pass | fail | skipped | error
    Json detail;
};

struct RunReport {
    std::vector<StageOutcome> stages;
    std::vector<std::string> artifacts;
    std::map<std::string, std::string> input_digests; // file name -> sha256
    std::map<std::string, double> seconds;           // kept out of the report file
    int exit_code = kExitPass;
};

RunReport run_pipeline(const PipelineConfig& config);
Json run_report_to_json(const RunReport& report);

std::string sha256_hex(const std::string& bytes);
// Writes dump_json(j) to dir/name; throws Io on failure.
void emit_json(const std::string& dir, const std::string& name, const Json& j);

// The algebra B: generating arrows invertible, iso arrows free.
Quiver counting_quiver(const SemidirectQuiver& ctx);

Json count_report_to_json(const CountReport& r);
Json strata_report_to_json(const StrataReport& r);
Json probe_report_to_json(const ProbeReport& r);
Json transport_check_to_json(const Quiver& qprime, const TransportCheck& c);
Json gdga_report_to_json(const GinzburgDga& dga, const DSquaredReport& r);
Json orbit_quiver_to_json(const SemidirectQuiver& ctx);
Json choice_to_json(const Quiver& q, const OrbitChoice& choice);
OrbitChoice choice_from_names(const Quiver& q, const std::vector<std::string>& generators,
                              const std::vector<std::string>& bases);

} // namespace tessella
