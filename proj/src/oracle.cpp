#include "extbwt/oracle.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace extbwt {

namespace {

Symbol preceding_symbol(const StringCollection& coll, SuffixRef s) {
    if (s.length == coll.k()) return kSentinel;
    return coll.string(s.string_index)[coll.k() - s.length - 1];
}

}  // namespace

std::size_t suffix_lcp(const StringCollection& coll, SuffixRef a, SuffixRef b) {
    std::size_t n = 0;
    const std::size_t bound = std::min(a.length, b.length);
    while (n < bound && suffix_symbol(coll, a, n) == suffix_symbol(coll, b, n)) ++n;
    return n;
}

std::size_t longest_repeat(const StringCollection& coll) {
    const std::size_t k = coll.k();
    for (std::size_t len = k; len >= 1; --len) {
        std::set<std::vector<Symbol>> seen;
        for (std::size_t i = 1; i <= coll.m(); ++i) {
            const auto s = coll.string(i);
            for (std::size_t start = 0; start + len <= k; ++start) {
                if (!seen.emplace(s.begin() + start, s.begin() + start + len).second) return len;
            }
        }
    }
    return 0;
}

OracleResult oracle_all(const StringCollection& coll) {
    const std::size_t m = coll.m();
    const std::size_t k = coll.k();
    if (coll.total_suffixes() > kOracleMaxPositions)
        throw Error(ErrorCode::too_large_for_oracle,
                    std::to_string(coll.total_suffixes()) + " suffixes exceed the oracle limit");

    OracleResult r;
    r.sa.reserve(coll.total_suffixes());
    for (std::uint32_t i = 1; i <= m; ++i) {
        for (std::uint32_t l = 0; l <= k; ++l) r.sa.push_back({i, l});
    }
    std::sort(r.sa.begin(), r.sa.end(), [&](SuffixRef a, SuffixRef b) {
        return compare_suffixes_prec_p(a, b, k + 1, coll) < 0;
    });

    r.partial_b.assign(k + 1, {});
    for (std::size_t i = 0; i < r.sa.size(); ++i) {
        const SuffixRef s = r.sa[i];
        r.bwt.push_back(preceding_symbol(coll, s));
        r.encoding.push_back(s.length);
        r.lcp.push_back(i == 0 ? -1 : static_cast<std::int64_t>(suffix_lcp(coll, r.sa[i - 1], s)));
        r.partial_b[s.length].push_back(r.bwt.back());
    }
    r.longest_repeat = longest_repeat(coll);
    return r;
}

bool oracle_cross_check(const StringCollection& coll, const OracleResult& result) {
    // Sentinel of string i becomes the value i; letter c becomes m + c.
    // Distinct sentinels make every suffix unique, so a plain sort suffices.
    const std::size_t m = coll.m();
    const std::size_t k = coll.k();
    struct Entry {
        std::vector<std::uint32_t> text;
        std::uint32_t preceding;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 1; i <= m; ++i) {
        const auto s = coll.string(i);
        for (std::size_t start = 0; start <= k; ++start) {
            Entry e;
            for (std::size_t pos = start; pos < k; ++pos) e.text.push_back(static_cast<std::uint32_t>(m + s[pos]));
            e.text.push_back(static_cast<std::uint32_t>(i));
            e.preceding = start == 0 ? 0u : s[start - 1];
            entries.push_back(std::move(e));
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.text < b.text; });

    if (entries.size() != result.bwt.size() || entries.size() != result.lcp.size()) return false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].preceding != result.bwt[i]) return false;
        std::int64_t lcp = -1;
        if (i > 0) {
            const auto& a = entries[i - 1].text;
            const auto& b = entries[i].text;
            std::size_t n = 0;
            while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
            lcp = static_cast<std::int64_t>(n);
        }
        if (lcp != result.lcp[i]) return false;
    }
    return true;
}

}  // namespace extbwt
