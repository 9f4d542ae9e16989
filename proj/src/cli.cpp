#include "extbwt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <vector>

#include "extbwt/oracle.hpp"
#include "extbwt/pipeline.hpp"

namespace extbwt::cli {

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::filesystem::path json_path_for(const std::filesystem::path& stats) {
    auto p = stats;
    p.replace_extension(".json");
    if (p == stats) p += ".json";
    return p;
}

bool dir_is_nonempty(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::exists(dir, ec)) return false;
    if (!std::filesystem::is_directory(dir, ec))
        throw Error(ErrorCode::usage, dir.string() + " exists and is not a directory");
    return std::filesystem::directory_iterator(dir, ec) != std::filesystem::directory_iterator();
}

void write_stats(const std::filesystem::path& path, const StringCollection& coll, const OutputBundle& out,
                 double seconds, const std::string& verified) {
    nlohmann::ordered_json j;
    j["m"] = coll.m();
    j["k"] = coll.k();
    j["sigma"] = coll.sigma();
    j["positions"] = coll.total_suffixes();
    j["iterations"] = out.iterations;
    for (Phase phase : {Phase::partition, Phase::merge, Phase::emit}) {
        const std::string name(to_string(phase));
        j[name + "_bytes_read"] = out.io[phase].bytes_read;
        j[name + "_bytes_written"] = out.io[phase].bytes_written;
        j[name + "_files_opened"] = out.io[phase].files_opened;
    }
    j["total_bytes_read"] = out.io.total().bytes_read;
    j["total_bytes_written"] = out.io.total().bytes_written;
    j["wall_time_seconds"] = seconds;
    j["verified"] = verified;

    std::ofstream kv(path);
    for (const auto& [key, value] : j.items()) {
        kv << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
    if (!kv) throw Error(ErrorCode::io_error, "cannot write " + path.string());

    std::ofstream js(json_path_for(path));
    js << j.dump(2) << '\n';
    if (!js) throw Error(ErrorCode::io_error, "cannot write " + json_path_for(path).string());
}

void write_bwt(Workdir& wd, const OutputBundle& out, const Alphabet& alphabet, const std::filesystem::path& path,
               bool binary) {
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    auto r = wd.reader(out.bwt, Phase::emit);
    while (auto c = r.next()) {
        if (binary) {
            f.put(static_cast<char>(*c));
        } else {
            f.put(alphabet.letter(*c));
        }
    }
    if (!binary) f.put('\n');
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

void write_lcp(Workdir& wd, const OutputBundle& out, const std::filesystem::path& path) {
    std::ofstream f(path);
    auto r = wd.reader(out.lcp, Phase::emit);
    while (auto v = r.next()) {
        if (*v == kLcpUndefined) {
            f << "-1\n";
        } else {
            f << *v << '\n';
        }
    }
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

template <typename A, typename B>
std::optional<std::size_t> first_difference(const A& a, const B& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<std::int64_t>(a[i]) != static_cast<std::int64_t>(b[i])) return i;
    }
    if (a.size() != b.size()) return n;
    return std::nullopt;
}

}  // namespace

StringCollection parse_input(const std::filesystem::path& path, InputFormat format, const Alphabet& alphabet) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());

    std::vector<std::string> strings;
    std::vector<std::size_t> origin;  // line (plain) or record (FASTA) number, 1-based
    std::string line;
    std::size_t line_no = 0;

    if (format == InputFormat::plain) {
        while (std::getline(in, line)) {
            ++line_no;
            strip_cr(line);
            strings.push_back(line);
            origin.push_back(line_no);
        }
        while (!strings.empty() && strings.back().empty()) {
            strings.pop_back();
            origin.pop_back();
        }
    } else {
        while (std::getline(in, line)) {
            ++line_no;
            strip_cr(line);
            if (line.empty() || line.front() == ';') continue;
            if (line.front() == '>') {
                strings.emplace_back();
                origin.push_back(strings.size());
                continue;
            }
            if (strings.empty())
                throw Error(ErrorCode::usage, path.string() + ": line " + std::to_string(line_no) +
                                                  ": sequence data before the first FASTA header");
            strings.back() += line;
        }
    }

    try {
        return validate_collection(strings, alphabet);
    } catch (const ValidationError& e) {
        if (strings.empty()) throw;
        const char* unit = format == InputFormat::plain ? "line " : "record ";
        throw Error(e.code(), path.string() + ": " + unit + std::to_string(origin[e.string_index()]) + ": " +
                                  e.what());
    }
}

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::unknown_symbol:
        case ErrorCode::unequal_length:
        case ErrorCode::empty_input:
        case ErrorCode::invalid_alphabet:
        case ErrorCode::usage: return kExitUsage;
        case ErrorCode::verify_mismatch: return kExitVerifyMismatch;
        default: return kExitIo;
    }
}

int run_build(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    try {
        if (!cfg.force && dir_is_nonempty(cfg.workdir)) {
            err << "error: workdir " << cfg.workdir << " is not empty (use --force to reuse it)\n";
            return kExitUsage;
        }
        const Alphabet alphabet(cfg.alphabet);
        const StringCollection coll = parse_input(cfg.input, cfg.format, alphabet);

        const auto start = std::chrono::steady_clock::now();
        Workdir wd(cfg.workdir, StorageOptions{cfg.buffer_size, !cfg.keep_intermediates});
        BuildOptions options;
        options.partition.verify_permutations = cfg.verify;
        options.merge.verify = cfg.verify;
        const BuildResult result = build_bwt(coll, wd, options);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        std::string verified = "no";
        if (cfg.verify) {
            if (coll.total_suffixes() > kOracleMaxPositions) {
                err << "warning: " << coll.total_suffixes() << " suffixes exceed the oracle limit; skipping --verify\n";
                verified = "skipped";
            } else {
                const OracleResult oracle = oracle_all(coll);
                const auto bwt = read_bwt(wd, result.output);
                const auto lcp = read_lcp(wd, result.output);
                if (auto i = first_difference(bwt, oracle.bwt)) {
                    err << "error: " << to_string(ErrorCode::verify_mismatch) << ": BWT differs from the oracle at index "
                        << (*i + 1) << '\n';
                    return kExitVerifyMismatch;
                }
                if (auto i = first_difference(lcp, oracle.lcp)) {
                    err << "error: " << to_string(ErrorCode::verify_mismatch) << ": LCP differs from the oracle at index "
                        << (*i + 1) << '\n';
                    return kExitVerifyMismatch;
                }
                verified = "yes";
            }
        }

        const auto out_bwt = cfg.out_bwt.value_or(cfg.workdir / "bwt.txt");
        const auto out_lcp = cfg.out_lcp.value_or(cfg.workdir / "lcp.txt");
        const auto stats = cfg.stats.value_or(cfg.workdir / "stats.txt");
        write_bwt(wd, result.output, alphabet, out_bwt, cfg.binary);
        write_lcp(wd, result.output, out_lcp);
        write_stats(stats, coll, result.output, seconds, verified);

        log << "m=" << coll.m() << " k=" << coll.k() << " iterations=" << result.output.iterations
            << " bwt=" << out_bwt.string() << " lcp=" << out_lcp.string() << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

int main(int argc, char** argv) {
    CLI::App app{"External-memory BWT and LCP construction for equal-length string collections"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "plain";
    std::string out_bwt, out_lcp, stats;
    auto* build = app.add_subcommand("build", "Build the BWT and LCP array of a string collection");
    build->add_option("--input", cfg.input, "Input file")->required();
    build->add_option("--format", format, "Input format")->check(CLI::IsMember({"plain", "fasta"}));
    build->add_option("--alphabet", cfg.alphabet, "Letters in increasing order (default ACGT)");
    build->add_option("--workdir", cfg.workdir, "Directory for intermediate files")->required();
    build->add_option("--out-bwt", out_bwt, "BWT output (default <workdir>/bwt.txt)");
    build->add_option("--out-lcp", out_lcp, "LCP output (default <workdir>/lcp.txt)");
    build->add_option("--stats", stats, "Stats output (default <workdir>/stats.txt, plus .json)");
    build->add_flag("--verify", cfg.verify, "Compare against the in-memory oracle");
    build->add_flag("--keep-intermediates", cfg.keep_intermediates, "Keep every per-iteration file");
    build->add_flag("--binary", cfg.binary, "Write the BWT as raw symbol codes");
    build->add_option("--buffer-size", cfg.buffer_size, "I/O buffer size in bytes")->check(CLI::PositiveNumber);
    build->add_flag("--force", cfg.force, "Allow a non-empty workdir");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    cfg.format = format == "fasta" ? InputFormat::fasta : InputFormat::plain;
    if (!out_bwt.empty()) cfg.out_bwt = out_bwt;
    if (!out_lcp.empty()) cfg.out_lcp = out_lcp;
    if (!stats.empty()) cfg.stats = stats;
    return run_build(cfg, std::cout, std::cerr);
}

}  // namespace extbwt::cli
