#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "extbwt/collection.hpp"

namespace extbwt::cli {

enum class InputFormat { plain, fasta };

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitIo = 2,
    kExitVerifyMismatch = 3,
};

struct RunConfig {
    std::filesystem::path input;
    InputFormat format = InputFormat::plain;
    std::string alphabet = "ACGT";
    std::filesystem::path workdir;
    std::optional<std::filesystem::path> out_bwt;    // default <workdir>/bwt.txt
    std::optional<std::filesystem::path> out_lcp;    // default <workdir>/lcp.txt
    std::optional<std::filesystem::path> stats;      // default <workdir>/stats.txt
    bool verify = false;
    bool keep_intermediates = false;
    bool binary = false;
    bool force = false;
    std::size_t buffer_size = std::size_t{1} << 20;
};

/// Plain: one string per line. FASTA: sequence lines of a record are joined.
/// Validation errors are rethrown naming the offending line (plain) or record (FASTA).
StringCollection parse_input(const std::filesystem::path& path, InputFormat format, const Alphabet& alphabet);

/// Runs both phases and writes outputs; returns one of ExitCode.
int run_build(const RunConfig& cfg, std::ostream& log, std::ostream& err);

/// Exit code for an error escaping the pipeline.
int exit_code_for(ErrorCode code) noexcept;

/// Full command-line entry point (`build` subcommand).
int main(int argc, char** argv);

}  // namespace extbwt::cli
