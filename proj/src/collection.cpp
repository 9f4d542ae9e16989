#include "extbwt/collection.hpp"

#include <cctype>

namespace extbwt {

namespace {

char upper(char c) {
    return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

}  // namespace

Alphabet::Alphabet(std::string_view letters) {
    codes_.fill(-1);
    if (letters.empty()) throw Error(ErrorCode::invalid_alphabet, "alphabet has no letters");
    if (letters.size() > kMaxLetters)
        throw Error(ErrorCode::invalid_alphabet, "alphabet has more than 255 letters");
    for (char raw : letters) {
        const char c = upper(raw);
        if (c == kSentinelChar)
            throw Error(ErrorCode::invalid_alphabet, "'$' is reserved for the sentinel");
        auto& slot = codes_[static_cast<unsigned char>(c)];
        if (slot >= 0)
            throw Error(ErrorCode::invalid_alphabet, std::string("duplicate letter '") + c + "'");
        letters_.push_back(c);
        slot = static_cast<std::int16_t>(letters_.size());
    }
}

std::optional<Symbol> Alphabet::code(char c) const noexcept {
    const auto v = codes_[static_cast<unsigned char>(upper(c))];
    if (v < 0) return std::nullopt;
    return static_cast<Symbol>(v);
}

char Alphabet::letter(Symbol code) const {
    if (code == kSentinel) return kSentinelChar;
    if (code > letters_.size())
        throw Error(ErrorCode::value_out_of_range, "symbol code " + std::to_string(code));
    return letters_[code - 1];
}

StringCollection::StringCollection(std::vector<Symbol> flat, std::size_t m, std::size_t k,
                                   std::size_t sigma)
    : flat_(std::move(flat)), m_(m), k_(k), sigma_(sigma) {
    if (m_ == 0 || k_ == 0) throw Error(ErrorCode::empty_input, "collection needs m >= 1 and k >= 1");
    if (flat_.size() != m_ * k_)
        throw Error(ErrorCode::length_mismatch, "flat symbol buffer is not m*k long");
    for (Symbol s : flat_) {
        if (s == kSentinel || s > sigma_)
            throw Error(ErrorCode::unknown_symbol, "symbol code " + std::to_string(s));
    }
}

StringCollection validate_collection(std::span<const std::string> raw, const Alphabet& alphabet) {
    if (raw.empty()) throw ValidationError(ErrorCode::empty_input, 0, "no input strings");
    const std::size_t k = raw.front().size();
    if (k == 0) throw ValidationError(ErrorCode::empty_input, 0, "first string is empty");

    std::vector<Symbol> flat;
    flat.reserve(raw.size() * k);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::string& s = raw[i];
        if (s.size() != k) {
            throw ValidationError(ErrorCode::unequal_length, i,
                                  "string " + std::to_string(i + 1) + " has length " +
                                      std::to_string(s.size()) + ", expected " + std::to_string(k));
        }
        for (std::size_t pos = 0; pos < s.size(); ++pos) {
            const auto c = alphabet.code(s[pos]);
            if (!c) {
                throw ValidationError(ErrorCode::unknown_symbol, i,
                                      "string " + std::to_string(i + 1) + " position " +
                                          std::to_string(pos + 1) + ": '" + s[pos] +
                                          "' is not in the alphabet");
            }
            flat.push_back(*c);
        }
    }
    return StringCollection(std::move(flat), raw.size(), k, alphabet.sigma());
}

std::strong_ordering compare_suffixes_prec_p(SuffixRef a, SuffixRef b, std::size_t p,
                                             const StringCollection& coll) {
    for (std::size_t pos = 0; pos < p; ++pos) {
        const Symbol ca = suffix_symbol(coll, a, pos);
        const Symbol cb = suffix_symbol(coll, b, pos);
        if (ca != cb) return ca <=> cb;
        // Both padded from here on.
        if (ca == kSentinel && pos >= a.length && pos >= b.length) break;
    }
    if (a.length != b.length) return a.length <=> b.length;
    return a.string_index <=> b.string_index;
}

}  // namespace extbwt
