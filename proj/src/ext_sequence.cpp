#include "extbwt/ext_sequence.hpp"

#include <cerrno>
#include <cstring>
#include <system_error>

#include <sys/resource.h>

namespace extbwt {

std::string_view to_string(Phase phase) noexcept {
    switch (phase) {
        case Phase::partition: return "partition";
        case Phase::merge: return "merge";
        case Phase::emit: return "emit";
    }
    return "unknown";
}

IoSnapshot IoStats::snapshot() const noexcept {
    IoSnapshot s;
    for (std::size_t i = 0; i < kPhaseCount; ++i) {
        s.phases[i].bytes_read = counters_[i].read.load(std::memory_order_relaxed);
        s.phases[i].bytes_written = counters_[i].written.load(std::memory_order_relaxed);
        s.phases[i].files_opened = counters_[i].opened.load(std::memory_order_relaxed);
    }
    return s;
}

namespace detail {

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) {
        const int err = errno;
        const auto code = (err == EMFILE || err == ENFILE) ? ErrorCode::too_many_open_files : ErrorCode::io_error;
        throw Error(code, "cannot open " + path.string() + ": " + std::strerror(err));
    }
    return f;
}

void write_bytes(std::FILE* f, const std::uint8_t* data, std::size_t n, const std::filesystem::path& path) {
    if (std::fwrite(data, 1, n, f) != n)
        throw Error(ErrorCode::io_error, "short write to " + path.string() + ": " + std::strerror(errno));
}

void read_bytes(std::FILE* f, std::uint8_t* data, std::size_t n, const std::filesystem::path& path) {
    if (std::fread(data, 1, n, f) != n)
        throw Error(ErrorCode::corrupt_file, "short read from " + path.string());
}

std::uint64_t file_size_or_throw(const std::filesystem::path& path) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot stat " + path.string() + ": " + ec.message());
    return size;
}

}  // namespace detail

Workdir::Workdir(std::filesystem::path root, StorageOptions options)
    : root_(std::move(root)), options_(options) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create workdir " + root_.string() + ": " + ec.message());
}

std::filesystem::path Workdir::file(std::string_view array, std::size_t index) const {
    return root_ / (std::string(array) + "_" + std::to_string(index) + ".bin");
}

std::filesystem::path Workdir::file(std::string_view array, std::size_t index, std::size_t sub) const {
    return root_ / (std::string(array) + "_" + std::to_string(index) + "_" + std::to_string(sub) + ".bin");
}

void Workdir::require_open_files(std::size_t needed, std::string_view what) {
    // stdin/stdout/stderr plus a little slack for the caller's own files.
    constexpr std::size_t kReserved = 8;
    rlimit limit{};
    if (getrlimit(RLIMIT_NOFILE, &limit) != 0 || limit.rlim_cur == RLIM_INFINITY) return;
    if (needed + kReserved > limit.rlim_cur) {
        throw Error(ErrorCode::too_many_open_files,
                    std::string(what) + " needs " + std::to_string(needed) +
                        " simultaneously open files but the limit is " + std::to_string(limit.rlim_cur) +
                        " (raise it with ulimit -n)");
    }
}

void Workdir::retire(const std::filesystem::path& path) const {
    if (!options_.rolling) return;
    std::error_code ec;
    std::filesystem::remove(path, ec);
}

}  // namespace extbwt
