#pragma once

// Shared vocabulary: alphabet, validated string collections, suffix
// coordinates and the p-prefix suffix order.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "extbwt/error.hpp"

namespace extbwt {

/// Symbol code. The sentinel is 0; letters are 1..sigma in alphabet order.
using Symbol = std::uint8_t;
inline constexpr Symbol kSentinel = 0;
inline constexpr char kSentinelChar = '$';

class Alphabet {
public:
    static constexpr std::size_t kMaxLetters = 255;

    /// Letters in increasing order; case-normalized to uppercase.
    /// Throws Error(invalid_alphabet) on duplicates, '$', empty or oversize input.
    explicit Alphabet(std::string_view letters);

    static Alphabet dna() { return Alphabet("ACGT"); }

    std::size_t sigma() const noexcept { return letters_.size(); }
    std::optional<Symbol> code(char c) const noexcept;
    /// '$' for the sentinel.
    char letter(Symbol code) const;
    const std::string& letters() const noexcept { return letters_; }

private:
    std::string letters_;
    std::array<std::int16_t, 256> codes_{};
};

/// m strings of common length k, stored as symbol codes.
/// String indices are 1-based throughout the public API.
class StringCollection {
public:
    StringCollection(std::vector<Symbol> flat, std::size_t m, std::size_t k, std::size_t sigma);

    std::size_t m() const noexcept { return m_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t sigma() const noexcept { return sigma_; }
    std::size_t total_suffixes() const noexcept { return (k_ + 1) * m_; }

    /// Symbols of string `index` (1-based), excluding the sentinel.
    std::span<const Symbol> string(std::size_t index) const noexcept {
        return {flat_.data() + (index - 1) * k_, k_};
    }

private:
    std::vector<Symbol> flat_;
    std::size_t m_;
    std::size_t k_;
    std::size_t sigma_;
};

/// Thrown by validate_collection; `string_index` is the 0-based offending entry.
class ValidationError : public Error {
public:
    ValidationError(ErrorCode code, std::size_t string_index, const std::string& what)
        : Error(code, what), string_index_(string_index) {}
    std::size_t string_index() const noexcept { return string_index_; }

private:
    std::size_t string_index_;
};

/// Uppercases and encodes every string. Rejects, never repairs.
StringCollection validate_collection(std::span<const std::string> raw, const Alphabet& alphabet);

/// The l-suffix of string `string_index` (1-based). Length 0 is the bare sentinel.
struct SuffixRef {
    std::uint32_t string_index = 1;
    std::uint32_t length = 0;

    friend bool operator==(const SuffixRef&, const SuffixRef&) = default;
};

/// Symbol at 0-based offset `pos` of the suffix, sentinel once the suffix is exhausted.
inline Symbol suffix_symbol(const StringCollection& coll, SuffixRef s, std::size_t pos) noexcept {
    if (pos >= s.length) return kSentinel;
    return coll.string(s.string_index)[coll.k() - s.length + pos];
}

/// Order by sentinel-padded p-prefix, then by length, then by string index.
/// Equality only for identical references.
std::strong_ordering compare_suffixes_prec_p(SuffixRef a, SuffixRef b, std::size_t p,
                                             const StringCollection& coll);

}  // namespace extbwt
