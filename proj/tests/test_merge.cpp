#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>
#include <set>

#include "extbwt/merge.hpp"
#include "extbwt/oracle.hpp"
#include "test_support.hpp"

using namespace extbwt;
using namespace extbwt::testing;

namespace {

struct Phase1 {
    StringCollection coll;
    PartialBwtColumns b;
};

Phase1 run_phase1(Workdir& wd, const std::vector<std::string>& s, const std::string& letters) {
    auto coll = make_collection(s, letters);
    auto b = partition_suffixes(coll, build_columns(coll, wd), wd);
    return {std::move(coll), std::move(b)};
}

std::vector<bool> bits(Workdir& wd, const SeqFile<ElementKind::bit>& f) {
    return load_all(wd, f, Phase::merge);
}

std::vector<bool> ends_at(std::size_t n, std::initializer_list<std::size_t> one_based) {
    std::vector<bool> out(n, false);
    for (auto i : one_based) out[i - 1] = true;
    return out;
}

std::vector<char> file_bytes(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Oracle-side view of the suffixes sorted per length (X_0..X_k).
std::vector<std::vector<SuffixRef>> sorted_by_length(const StringCollection& coll) {
    std::vector<std::vector<SuffixRef>> x(coll.k() + 1);
    for (auto s : all_suffixes(coll)) x[s.length].push_back(s);
    for (auto& v : x) {
        std::sort(v.begin(), v.end(), [&](SuffixRef a, SuffixRef b) {
            return compare_suffixes_prec_p(a, b, coll.k() + 1, coll) < 0;
        });
    }
    return x;
}

// Within one label the encoding keeps the final per-length order, so equal
// p-prefixes of the same length may appear in any index order.
bool ordered_at(const StringCollection& coll, SuffixRef a, SuffixRef b, std::size_t p) {
    if (compare_suffixes_prec_p(a, b, p, coll) < 0) return true;
    return a.length == b.length && suffix_lcp(coll, a, b) >= std::min<std::size_t>(p, a.length);
}

// Checks one merge state against its definition: the encoding decodes to the
// suffixes in prec_p order, segments group equal p-prefixes, Lcp_p holds the
// p-bounded lcp and equals p exactly off segment starts.
void check_state(Workdir& wd, const StringCollection& coll, const MergeState& s) {
    const auto labels = load_all(wd, s.interleave, Phase::merge);
    const auto ends = bits(wd, s.segments);
    const auto lcp = load_all(wd, s.lcp, Phase::merge);
    const std::size_t n = coll.total_suffixes();
    REQUIRE(labels.size() == n);
    REQUIRE(ends.size() == n);
    REQUIRE(lcp.size() == n);
    REQUIRE(ends.back());

    std::vector<std::size_t> count(coll.k() + 1, 0);
    for (auto l : labels) {
        REQUIRE(l <= coll.k());
        ++count[l];
    }
    for (auto c : count) REQUIRE(c == coll.m());

    const auto x = sorted_by_length(coll);
    std::vector<std::size_t> rank(coll.k() + 1, 0);
    std::vector<SuffixRef> decoded;
    for (auto l : labels) decoded.push_back(x[l][rank[l]++]);

    for (std::size_t i = 1; i < n; ++i) {
        REQUIRE(ordered_at(coll, decoded[i - 1], decoded[i], s.p));
        const bool start = ends[i - 1];
        const std::size_t common = suffix_lcp(coll, decoded[i - 1], decoded[i]);
        REQUIRE(start == (common < s.p));
        REQUIRE(lcp[i] == std::min(common, s.p));
        REQUIRE((lcp[i] == s.p) == !start);
    }
    REQUIRE(lcp[0] == 0);

    bool any_wide = false;
    for (std::size_t i = 1; i < n; ++i) any_wide |= !ends[i - 1];
    REQUIRE(s.converged == !any_wide);
}

}  // namespace

TEST_CASE("init_merge_state") {
    TempDir dir;
    Workdir wd(dir.path());
    SUBCASE("AC, CA") {
        const auto in = run_phase1(wd, {"AC", "CA"}, "AC");
        const auto s = init_merge_state(in.b, wd);
        CHECK(s.p == 0);
        CHECK(load_all(wd, s.interleave, Phase::merge) == std::vector<std::uint32_t>{0, 0, 1, 1, 2, 2});
        CHECK(bits(wd, s.segments) == ends_at(6, {6}));
        CHECK(load_all(wd, s.lcp, Phase::merge) == std::vector<std::uint32_t>(6, 0));
        CHECK(s.q.p == 1);
        CHECK(s.q.column(0) == nullptr);
        CHECK(load_all(wd, *s.q.column(1), Phase::merge) == codes("AC", "AC"));
        CHECK(load_all(wd, *s.q.column(2), Phase::merge) == codes("AC", "AC"));
        CHECK_FALSE(s.converged);
    }
    SUBCASE("single string") {
        const auto in = run_phase1(wd, {"A"}, "A");
        const auto s = init_merge_state(in.b, wd);
        CHECK(load_all(wd, s.interleave, Phase::merge) == std::vector<std::uint32_t>{0, 1});
        CHECK(bits(wd, s.segments) == ends_at(2, {2}));
    }
    SUBCASE("missing column") {
        auto in = run_phase1(wd, {"AC", "CA"}, "AC");
        in.b.b.pop_back();
        CHECK_THROWS_WITH_AS(init_merge_state(in.b, wd), doctest::Contains("MissingColumn"), Error);
    }
}

TEST_CASE("merge_iteration on AC, CA") {
    TempDir dir;
    Workdir wd(dir.path());
    const auto in = run_phase1(wd, {"AC", "CA"}, "AC");
    const auto s0 = init_merge_state(in.b, wd);

    const auto s1 = merge_iteration(s0, wd);
    CHECK(s1.p == 1);
    CHECK(load_all(wd, s1.interleave, Phase::merge) == std::vector<std::uint32_t>{0, 0, 1, 2, 1, 2});
    CHECK(load_all(wd, s1.lcp, Phase::merge) == std::vector<std::uint32_t>{0, 0, 0, 1, 0, 1});
    CHECK(bits(wd, s1.segments) == ends_at(6, {1, 2, 4, 6}));
    CHECK_FALSE(s1.converged);

    // Stale Q columns are rejected.
    CHECK_THROWS_WITH_AS(merge_iteration(s1, wd), doctest::Contains("MissingColumn"), Error);

    auto s1q = s1;
    s1q.q = compute_q_columns(in.b, s1.q, wd);
    const auto s2 = merge_iteration(s1q, wd);
    CHECK(s2.p == 2);
    CHECK(load_all(wd, s2.interleave, Phase::merge) == std::vector<std::uint32_t>{0, 0, 1, 2, 1, 2});
    CHECK(load_all(wd, s2.lcp, Phase::merge) == std::vector<std::uint32_t>{0, 0, 0, 1, 0, 1});
    CHECK(bits(wd, s2.segments) == ends_at(6, {1, 2, 3, 4, 5, 6}));
    CHECK(s2.converged);

    check_state(wd, in.coll, s0);
    check_state(wd, in.coll, s1);
    check_state(wd, in.coll, s2);
}

TEST_CASE("merge_iteration input validation") {
    TempDir dir;
    Workdir wd(dir.path());
    const auto in = run_phase1(wd, {"AC", "CA"}, "AC");
    auto s0 = init_merge_state(in.b, wd);

    SUBCASE("label out of range") {
        auto w = wd.writer<ElementKind::index>(dir / "bad.bin", Phase::merge);
        for (std::uint64_t v : {0, 0, 1, 1, 2, 7}) w.append(v);
        s0.interleave = w.finalize();
        CHECK_THROWS_WITH_AS(merge_iteration(s0, wd), doctest::Contains("LabelOutOfRange"), Error);
    }
    SUBCASE("label occurring too often") {
        auto w = wd.writer<ElementKind::index>(dir / "bad.bin", Phase::merge);
        for (std::uint64_t v : {0, 0, 0, 1, 2, 2}) w.append(v);
        s0.interleave = w.finalize();
        CHECK_THROWS_WITH_AS(merge_iteration(s0, wd), doctest::Contains("RankOverflow"), Error);
    }
    SUBCASE("length mismatch") {
        auto w = wd.writer<ElementKind::index>(dir / "bad.bin", Phase::merge);
        for (std::uint64_t v : {0, 0, 1, 1, 2}) w.append(v);
        s0.interleave = w.finalize();
        CHECK_THROWS_WITH_AS(merge_iteration(s0, wd), doctest::Contains("LengthMismatch"), Error);
    }
}

TEST_CASE("compute_q_columns") {
    TempDir dir;
    Workdir wd(dir.path());
    SUBCASE("AC, CA at p = 2") {
        const auto in = run_phase1(wd, {"AC", "CA"}, "AC");
        const auto s0 = init_merge_state(in.b, wd);
        const auto q2 = compute_q_columns(in.b, s0.q, wd);
        CHECK(q2.p == 2);
        REQUIRE(q2.columns.size() == 1);
        CHECK(load_all(wd, *q2.column(2), Phase::merge) == codes("CA", "AC"));
        // Exhausted columns are implicit.
        CHECK(q2.column(1) == nullptr);
        CHECK(q2.column(0) == nullptr);
    }
    SUBCASE("columns match the oracle's p-th symbols (property)") {
        std::mt19937_64 rng(41);
        for (int trial = 0; trial < 40; ++trial) {
            const auto spec = random_spec(rng, 20, 10);
            TempDir sub;
            Workdir w2(sub.path());
            const auto in = run_phase1(w2, random_strings(rng, spec), letters_for(spec.sigma));
            const auto x = sorted_by_length(in.coll);
            QColumns q = init_merge_state(in.b, w2).q;
            while (true) {
                for (std::size_t l = 0; l <= in.coll.k(); ++l) {
                    const auto* col = q.column(l);
                    std::vector<Symbol> expect;
                    for (auto s : x[l]) expect.push_back(suffix_symbol(in.coll, s, q.p - 1));
                    if (!col) {
                        REQUIRE(l < q.p);
                        REQUIRE(std::all_of(expect.begin(), expect.end(), [](Symbol c) { return c == kSentinel; }));
                    } else {
                        REQUIRE(load_all(w2, *col, Phase::merge) == expect);
                    }
                }
                if (q.p > in.coll.k()) break;
                q = compute_q_columns(in.b, q, w2);
            }
        }
    }
    SUBCASE("single string") {
        const auto in = run_phase1(wd, {"GATC"}, "ACGT");
        auto q = init_merge_state(in.b, wd).q;
        for (std::size_t p = 2; p <= 4; ++p) {
            q = compute_q_columns(in.b, q, wd);
            for (std::size_t l = p; l <= 4; ++l) {
                const SuffixRef s{1, static_cast<std::uint32_t>(l)};
                CHECK(load_all(wd, *q.column(l), Phase::merge) ==
                      std::vector<Symbol>{suffix_symbol(in.coll, s, p - 1)});
            }
        }
    }
}

TEST_CASE("merge_suffixes examples") {
    TempDir dir;
    Workdir wd(dir.path());
    SUBCASE("AC, CA") {
        const auto in = run_phase1(wd, {"AC", "CA"}, "AC");
        const auto r = merge_suffixes(in.b, wd);
        CHECK(load_all(wd, r.interleave, Phase::merge) == std::vector<std::uint32_t>{0, 0, 1, 2, 1, 2});
        CHECK(load_all(wd, r.lcp, Phase::merge) == std::vector<std::uint32_t>{0, 0, 0, 1, 0, 1});
        CHECK(r.iterations == 2);
        CHECK(r.per_iteration.size() == 2);
    }
    SUBCASE("single string") {
        const auto in = run_phase1(wd, {"A"}, "A");
        const auto r = merge_suffixes(in.b, wd);
        CHECK(load_all(wd, r.interleave, Phase::merge) == std::vector<std::uint32_t>{0, 1});
        CHECK(load_all(wd, r.lcp, Phase::merge) == std::vector<std::uint32_t>{0, 0});
        CHECK(r.iterations == 1);
    }
    SUBCASE("duplicates terminate within k + 1") {
        const auto in = run_phase1(wd, {"AC", "AC"}, "AC");
        const auto r = merge_suffixes(in.b, wd);
        CHECK(r.iterations <= 3);
        const auto oracle = oracle_all(in.coll);
        const auto enc = load_all(wd, r.interleave, Phase::merge);
        CHECK(std::vector<std::uint32_t>(enc.begin(), enc.end()) == oracle.encoding);
        auto lcp = load_all(wd, r.lcp, Phase::merge);
        CHECK(lcp[0] == 0);
        for (std::size_t i = 1; i < lcp.size(); ++i) CHECK(lcp[i] == oracle.lcp[i]);
    }
}

TEST_CASE("merge invariants on random collections (property)") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 120; ++trial) {
        const auto spec = random_spec(rng, 30, 12);
        TempDir dir;
        Workdir wd(dir.path(), StorageOptions{32, true});
        const auto in = run_phase1(wd, random_strings(rng, spec), letters_for(spec.sigma));
        MergeOptions opts;
        opts.verify = true;
        opts.bucket_spill_bytes = 8;  // force spills on any bucket above two labels
        std::size_t calls = 0;
        opts.on_iteration = [&](const MergeState& prev, const MergeState& next) {
            ++calls;
            if (calls == 1) check_state(wd, in.coll, prev);
            check_state(wd, in.coll, next);
            REQUIRE(next.p == prev.p + 1);
            const auto e0 = bits(wd, prev.segments);
            const auto e1 = bits(wd, next.segments);
            for (std::size_t i = 0; i < e0.size(); ++i) {
                if (e0[i]) REQUIRE(e1[i]);
            }
        };
        const auto r = merge_suffixes(in.b, wd, opts);
        REQUIRE(calls == r.iterations);
        REQUIRE(r.final_state.converged);

        const auto oracle = oracle_all(in.coll);
        const auto enc = load_all(wd, r.interleave, Phase::merge);
        REQUIRE(std::vector<std::uint32_t>(enc.begin(), enc.end()) == oracle.encoding);

        // Iterations = (max LCP) + 1; for duplicate-free input that is L + 1.
        std::int64_t max_lcp = 0;
        for (auto v : oracle.lcp) max_lcp = std::max(max_lcp, v);
        REQUIRE(r.iterations == static_cast<std::size_t>(max_lcp) + 1);
        REQUIRE(r.iterations <= in.coll.k() + 1);
    }
}

TEST_CASE("iterations equal L + 1 without duplicate strings") {
    std::mt19937_64 rng(43);
    int checked = 0;
    while (checked < 40) {
        const auto spec = random_spec(rng, 30, 15);
        auto strings = random_strings(rng, spec);
        if (std::set<std::string>(strings.begin(), strings.end()).size() != strings.size()) continue;
        TempDir dir;
        Workdir wd(dir.path());
        const auto in = run_phase1(wd, strings, letters_for(spec.sigma));
        const auto r = merge_suffixes(in.b, wd);
        REQUIRE(r.iterations == longest_repeat(in.coll) + 1);
        ++checked;
    }
}

TEST_CASE("forced extra iteration is a fixed point") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 30; ++trial) {
        const auto spec = random_spec(rng, 20, 10);
        TempDir dir;
        Workdir wd(dir.path());
        const auto in = run_phase1(wd, random_strings(rng, spec), letters_for(spec.sigma));
        const auto r = merge_suffixes(in.b, wd);
        auto last = r.final_state;
        REQUIRE(last.converged);
        last.q = compute_q_columns(in.b, last.q, wd);
        const auto extra = merge_iteration(last, wd);
        REQUIRE(extra.converged);
        REQUIRE(file_bytes(extra.interleave.path) == file_bytes(last.interleave.path));
        REQUIRE(file_bytes(extra.lcp.path) == file_bytes(last.lcp.path));
        REQUIRE(file_bytes(extra.segments.path) == file_bytes(last.segments.path));
    }
}

TEST_CASE("bucket spilling does not change output bytes") {
    std::mt19937_64 rng(45);
    const auto strings = random_strings(rng, RandomSpec{40, 16, 2, true, true});
    std::vector<std::vector<char>> results;
    for (std::size_t budget : {std::size_t{0}, std::size_t{4}, std::size_t{1} << 20}) {
        TempDir dir;
        Workdir wd(dir.path());
        const auto in = run_phase1(wd, strings, "AC");
        MergeOptions opts;
        opts.bucket_spill_bytes = budget;
        const auto r = merge_suffixes(in.b, wd, opts);
        auto bytes = file_bytes(r.interleave.path);
        const auto lcp = file_bytes(r.lcp.path);
        bytes.insert(bytes.end(), lcp.begin(), lcp.end());
        results.push_back(std::move(bytes));
    }
    CHECK(results[0] == results[1]);
    CHECK(results[1] == results[2]);
}
