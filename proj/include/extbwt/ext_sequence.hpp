#pragma once

// File-backed sequences that are only ever written front to back and read
// front to back, plus per-phase byte accounting.
//
// On-disk layout per element kind:
//   symbol  1 byte
//   index   4 bytes, little-endian unsigned
//   lcpval  4 bytes, little-endian unsigned
//   bit     packed LSB-first, ceil(length / 8) bytes
//
// Files are named `<workdir>/<array>_<index>.bin`.

#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "extbwt/collection.hpp"
#include "extbwt/error.hpp"

namespace extbwt {

enum class ElementKind { symbol, index, lcpval, bit };

template <ElementKind K>
struct ElementTraits;

template <>
struct ElementTraits<ElementKind::symbol> {
    using value_type = Symbol;
    static constexpr std::size_t width = 1;
};

template <>
struct ElementTraits<ElementKind::index> {
    using value_type = std::uint32_t;
    static constexpr std::size_t width = 4;
};

template <>
struct ElementTraits<ElementKind::lcpval> {
    using value_type = std::uint32_t;
    static constexpr std::size_t width = 4;
};

template <>
struct ElementTraits<ElementKind::bit> {
    using value_type = bool;
    static constexpr std::size_t width = 0;
};

template <ElementKind K>
using element_t = typename ElementTraits<K>::value_type;

constexpr std::uint64_t byte_size(ElementKind kind, std::uint64_t length) noexcept {
    switch (kind) {
        case ElementKind::symbol: return length;
        case ElementKind::index:
        case ElementKind::lcpval: return length * 4;
        case ElementKind::bit: return (length + 7) / 8;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// I/O accounting

enum class Phase : std::size_t { partition = 0, merge = 1, emit = 2 };
inline constexpr std::size_t kPhaseCount = 3;
std::string_view to_string(Phase phase) noexcept;

struct PhaseIo {
    std::uint64_t bytes_read = 0;
    std::uint64_t bytes_written = 0;
    std::uint64_t files_opened = 0;

    std::uint64_t bytes_moved() const noexcept { return bytes_read + bytes_written; }

    PhaseIo& operator+=(const PhaseIo& o) noexcept {
        bytes_read += o.bytes_read;
        bytes_written += o.bytes_written;
        files_opened += o.files_opened;
        return *this;
    }
    friend PhaseIo operator-(PhaseIo a, const PhaseIo& b) noexcept {
        a.bytes_read -= b.bytes_read;
        a.bytes_written -= b.bytes_written;
        a.files_opened -= b.files_opened;
        return a;
    }
    friend bool operator==(const PhaseIo&, const PhaseIo&) = default;
};

struct IoSnapshot {
    std::array<PhaseIo, kPhaseCount> phases{};

    const PhaseIo& operator[](Phase p) const noexcept { return phases[static_cast<std::size_t>(p)]; }
    PhaseIo total() const noexcept {
        PhaseIo t;
        for (const auto& p : phases) t += p;
        return t;
    }
};

/// Thread-safe, monotonically non-decreasing counters.
class IoStats {
public:
    void add_read(Phase p, std::uint64_t n) noexcept { slot(p).read.fetch_add(n, std::memory_order_relaxed); }
    void add_written(Phase p, std::uint64_t n) noexcept { slot(p).written.fetch_add(n, std::memory_order_relaxed); }
    void add_open(Phase p) noexcept { slot(p).opened.fetch_add(1, std::memory_order_relaxed); }

    IoSnapshot snapshot() const noexcept;

private:
    struct Counters {
        std::atomic<std::uint64_t> read{0};
        std::atomic<std::uint64_t> written{0};
        std::atomic<std::uint64_t> opened{0};
    };
    Counters& slot(Phase p) noexcept { return counters_[static_cast<std::size_t>(p)]; }

    std::array<Counters, kPhaseCount> counters_;
};

// ---------------------------------------------------------------------------
// Finalized sequence descriptor

template <ElementKind K>
struct SeqFile {
    std::filesystem::path path;
    std::uint64_t length = 0;

    std::uint64_t bytes() const noexcept { return byte_size(K, length); }
};

struct StorageOptions {
    std::size_t buffer_size = std::size_t{1} << 20;
    /// Delete superseded per-iteration files once their successor is complete.
    bool rolling = true;
};

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode);
void write_bytes(std::FILE* f, const std::uint8_t* data, std::size_t n, const std::filesystem::path& path);
void read_bytes(std::FILE* f, std::uint8_t* data, std::size_t n, const std::filesystem::path& path);
std::uint64_t file_size_or_throw(const std::filesystem::path& path);

}  // namespace detail

// ---------------------------------------------------------------------------
// Writer

template <ElementKind K>
class SequenceWriter {
public:
    using value_type = element_t<K>;

    SequenceWriter(std::filesystem::path path, IoStats& stats, Phase phase, std::size_t buffer_size)
        : path_(std::move(path)), stats_(&stats), phase_(phase),
          capacity_(buffer_size == 0 ? 1 : buffer_size) {
        file_ = detail::open_file(path_, "wb");
        stats_->add_open(phase_);
    }

    SequenceWriter(SequenceWriter&&) noexcept = default;
    SequenceWriter& operator=(SequenceWriter&&) noexcept = default;
    SequenceWriter(const SequenceWriter&) = delete;
    SequenceWriter& operator=(const SequenceWriter&) = delete;
    ~SequenceWriter() = default;

    void append(value_type value)
        requires(K == ElementKind::symbol || K == ElementKind::bit)
    {
        check_writing();
        if constexpr (K == ElementKind::bit) {
            if (value) pending_bits_ |= static_cast<std::uint8_t>(1u << (length_ % 8));
            ++length_;
            if (length_ % 8 == 0) {
                push_byte(pending_bits_);
                pending_bits_ = 0;
            }
        } else {
            push_byte(value);
            ++length_;
        }
    }

    /// Fixed-width 32-bit kinds accept any unsigned value and reject what does not fit.
    void append(std::uint64_t value)
        requires(K == ElementKind::index || K == ElementKind::lcpval)
    {
        check_writing();
        if (value > std::numeric_limits<std::uint32_t>::max())
            throw Error(ErrorCode::value_out_of_range,
                        std::to_string(value) + " does not fit in 4 bytes (" + path_.string() + ")");
        for (int shift = 0; shift < 32; shift += 8) push_byte(static_cast<std::uint8_t>(value >> shift));
        ++length_;
    }

    std::uint64_t length() const noexcept { return length_; }
    bool finalized() const noexcept { return file_ == nullptr; }
    const std::filesystem::path& path() const noexcept { return path_; }

    SeqFile<K> finalize() {
        check_writing();
        if constexpr (K == ElementKind::bit) {
            if (length_ % 8 != 0) push_byte(pending_bits_);
        }
        flush();
        file_.reset();
        return SeqFile<K>{path_, length_};
    }

private:
    void check_writing() const {
        if (!file_) throw Error(ErrorCode::wrong_state, "sequence already finalized: " + path_.string());
    }
    void push_byte(std::uint8_t b) {
        buffer_.push_back(b);
        if (buffer_.size() >= capacity_) flush();
    }
    void flush() {
        if (buffer_.empty()) return;
        detail::write_bytes(file_.get(), buffer_.data(), buffer_.size(), path_);
        stats_->add_written(phase_, buffer_.size());
        buffer_.clear();
    }

    std::filesystem::path path_;
    IoStats* stats_;
    Phase phase_;
    std::size_t capacity_;
    detail::FilePtr file_;
    std::vector<std::uint8_t> buffer_;
    std::uint64_t length_ = 0;
    std::uint8_t pending_bits_ = 0;
};

// ---------------------------------------------------------------------------
// Reader

template <ElementKind K>
class SequenceReader {
public:
    using value_type = element_t<K>;

    /// Validates the on-disk size against `seq.length` before reading anything.
    SequenceReader(const SeqFile<K>& seq, IoStats& stats, Phase phase, std::size_t buffer_size)
        : path_(seq.path), stats_(&stats), phase_(phase), length_(seq.length) {
        const std::uint64_t actual = detail::file_size_or_throw(path_);
        if constexpr (K != ElementKind::bit) {
            if (actual % ElementTraits<K>::width != 0)
                throw Error(ErrorCode::corrupt_file,
                            path_.string() + ": size " + std::to_string(actual) +
                                " is not a multiple of the element width");
        }
        if (actual != seq.bytes())
            throw Error(ErrorCode::corrupt_file, path_.string() + ": expected " + std::to_string(seq.bytes()) +
                                                     " bytes, found " + std::to_string(actual));
        remaining_bytes_ = actual;
        const std::uint64_t want = buffer_size == 0 ? 1 : buffer_size;
        buffer_.resize(static_cast<std::size_t>(std::min<std::uint64_t>(want, std::max<std::uint64_t>(actual, 1))));
        file_ = detail::open_file(path_, "rb");
        stats_->add_open(phase_);
    }

    SequenceReader(SequenceReader&&) noexcept = default;
    SequenceReader& operator=(SequenceReader&&) noexcept = default;
    SequenceReader(const SequenceReader&) = delete;
    SequenceReader& operator=(const SequenceReader&) = delete;

    /// Next element in append order; nullopt once all `length` elements were produced.
    std::optional<value_type> next() {
        if (consumed_ == length_) return std::nullopt;
        if constexpr (K == ElementKind::bit) {
            if (consumed_ % 8 == 0) current_byte_ = pull_byte();
            const bool bit = (current_byte_ >> (consumed_ % 8)) & 1u;
            ++consumed_;
            return bit;
        } else if constexpr (K == ElementKind::symbol) {
            ++consumed_;
            return pull_byte();
        } else {
            std::uint32_t v = 0;
            for (int shift = 0; shift < 32; shift += 8) v |= static_cast<std::uint32_t>(pull_byte()) << shift;
            ++consumed_;
            return v;
        }
    }

    std::uint64_t length() const noexcept { return length_; }
    std::uint64_t remaining() const noexcept { return length_ - consumed_; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::uint8_t pull_byte() {
        if (pos_ == filled_) refill();
        return buffer_[pos_++];
    }
    void refill() {
        if (remaining_bytes_ == 0)
            throw Error(ErrorCode::corrupt_file, path_.string() + ": unexpected end of file");
        const auto n = static_cast<std::size_t>(std::min<std::uint64_t>(buffer_.size(), remaining_bytes_));
        detail::read_bytes(file_.get(), buffer_.data(), n, path_);
        stats_->add_read(phase_, n);
        remaining_bytes_ -= n;
        filled_ = n;
        pos_ = 0;
    }

    std::filesystem::path path_;
    IoStats* stats_;
    Phase phase_;
    std::uint64_t length_;
    std::uint64_t consumed_ = 0;
    std::uint64_t remaining_bytes_ = 0;
    detail::FilePtr file_;
    std::vector<std::uint8_t> buffer_;
    std::size_t filled_ = 0;
    std::size_t pos_ = 0;
    std::uint8_t current_byte_ = 0;
};

// ---------------------------------------------------------------------------
// Working directory

class Workdir {
public:
    /// Creates `root` if absent.
    explicit Workdir(std::filesystem::path root, StorageOptions options = {});

    const std::filesystem::path& root() const noexcept { return root_; }
    const StorageOptions& options() const noexcept { return options_; }
    IoStats& stats() noexcept { return stats_; }
    const IoStats& stats() const noexcept { return stats_; }

    std::filesystem::path file(std::string_view array, std::size_t index) const;
    std::filesystem::path file(std::string_view array, std::size_t index, std::size_t sub) const;

    template <ElementKind K>
    SequenceWriter<K> writer(const std::filesystem::path& path, Phase phase) {
        return SequenceWriter<K>(path, stats_, phase, options_.buffer_size);
    }

    template <ElementKind K>
    SequenceReader<K> reader(const SeqFile<K>& seq, Phase phase) {
        return SequenceReader<K>(seq, stats_, phase, options_.buffer_size);
    }

    /// Fails fast with TooManyOpenFiles when the process limit is below `needed` descriptors.
    static void require_open_files(std::size_t needed, std::string_view what);

    /// Removes a superseded file when rolling mode is on; no-op otherwise.
    void retire(const std::filesystem::path& path) const;
    template <ElementKind K>
    void retire(const SeqFile<K>& seq) const {
        retire(seq.path);
    }

private:
    std::filesystem::path root_;
    StorageOptions options_;
    IoStats stats_;
};

/// Reads a whole sequence into memory. Test and small-output helper.
template <ElementKind K>
std::vector<element_t<K>> load_all(Workdir& wd, const SeqFile<K>& seq, Phase phase) {
    auto r = wd.reader(seq, phase);
    std::vector<element_t<K>> out;
    out.reserve(static_cast<std::size_t>(seq.length));
    while (auto v = r.next()) out.push_back(*v);
    return out;
}

/// Descriptor for an existing byte-width file whose length is inferred from its size.
template <ElementKind K>
    requires(K != ElementKind::bit)
SeqFile<K> existing_sequence(const std::filesystem::path& path) {
    const std::uint64_t size = detail::file_size_or_throw(path);
    if (size % ElementTraits<K>::width != 0)
        throw Error(ErrorCode::corrupt_file,
                    path.string() + ": size " + std::to_string(size) + " is not a multiple of the element width");
    return SeqFile<K>{path, size / ElementTraits<K>::width};
}

// ---------------------------------------------------------------------------
// Buckets

/// One append-only sequence per symbol code 0..sigma.
template <ElementKind K>
class BucketSet {
public:
    BucketSet(Workdir& wd, std::string_view array, std::size_t iteration, std::size_t bucket_count, Phase phase)
        : wd_(&wd) {
        writers_.reserve(bucket_count);
        for (std::size_t c = 0; c < bucket_count; ++c)
            writers_.push_back(wd.writer<K>(wd.file(array, iteration, c), phase));
    }

    std::size_t size() const noexcept { return writers_.empty() ? buckets_.size() : writers_.size(); }
    bool finalized() const noexcept { return writers_.empty(); }

    template <typename V>
    void append(Symbol bucket, V value) {
        if (finalized()) throw Error(ErrorCode::wrong_state, "bucket set already finalized");
        if (bucket >= writers_.size())
            throw Error(ErrorCode::value_out_of_range, "bucket " + std::to_string(bucket) + " out of range");
        writers_[bucket].append(value);
    }

    void finalize() {
        if (finalized()) throw Error(ErrorCode::wrong_state, "bucket set already finalized");
        for (auto& w : writers_) buckets_.push_back(w.finalize());
        writers_.clear();
    }

    const std::vector<SeqFile<K>>& buckets() const {
        if (!finalized()) throw Error(ErrorCode::wrong_state, "bucket set not finalized");
        return buckets_;
    }

    void retire() const {
        for (const auto& b : buckets_) wd_->retire(b);
    }

    Workdir& workdir() const noexcept { return *wd_; }

private:
    Workdir* wd_;
    std::vector<SequenceWriter<K>> writers_;
    std::vector<SeqFile<K>> buckets_;
};

/// Bucket 0's elements, then bucket 1's, ..., each in append order. Finalizes `out`.
template <ElementKind K>
SeqFile<K> concat_buckets(const BucketSet<K>& bs, SequenceWriter<K> out, Phase phase) {
    if (!bs.finalized()) throw Error(ErrorCode::wrong_state, "concat_buckets needs finalized buckets");
    for (const auto& bucket : bs.buckets()) {
        auto r = bs.workdir().reader(bucket, phase);
        while (auto v = r.next()) out.append(*v);
    }
    return out.finalize();
}

}  // namespace extbwt
