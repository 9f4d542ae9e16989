#pragma once

// In-memory brute-force reference. Sorts every suffix with the explicit
// comparator and derives everything else by definition. Shares nothing with
// the external pipeline beyond the collection types.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "extbwt/collection.hpp"

namespace extbwt {

inline constexpr std::size_t kOracleMaxPositions = 1'000'000;

struct OracleResult {
    std::vector<SuffixRef> sa;
    std::vector<Symbol> bwt;
    std::vector<std::int64_t> lcp;        // lcp[0] == -1
    std::vector<std::uint32_t> encoding;  // suffix length at each rank
    std::vector<std::vector<Symbol>> partial_b;  // B_0..B_k
    std::size_t longest_repeat = 0;       // L
};

/// Throws TooLargeForOracle when (k+1)m exceeds kOracleMaxPositions.
OracleResult oracle_all(const StringCollection& coll);

/// Common prefix length of two suffixes; sentinels never match.
std::size_t suffix_lcp(const StringCollection& coll, SuffixRef a, SuffixRef b);

/// Longest substring occurring at least twice (any strings, any positions).
std::size_t longest_repeat(const StringCollection& coll);

/// Recomputes bwt and lcp by a second route (per-string distinct sentinels,
/// plain lexicographic sort) and reports whether it agrees with `result`.
bool oracle_cross_check(const StringCollection& coll, const OracleResult& result);

}  // namespace extbwt
