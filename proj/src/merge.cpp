#include "extbwt/merge.hpp"

#include <string>

namespace extbwt {

namespace {

constexpr auto kSym = ElementKind::symbol;
constexpr auto kIdx = ElementKind::index;
constexpr auto kLcp = ElementKind::lcpval;
constexpr auto kBit = ElementKind::bit;

// Routing list L_c for one segment. Stays in RAM up to a byte budget, then
// moves everything to a scratch file and keeps appending there.
class RoutingBucket {
public:
    RoutingBucket(Workdir& wd, std::filesystem::path scratch, std::size_t budget_bytes)
        : wd_(&wd), scratch_(std::move(scratch)), budget_(budget_bytes / sizeof(std::uint32_t)) {}

    void push(std::uint32_t label) {
        ++size_;
        if (disk_) {
            disk_->append(std::uint64_t{label});
            return;
        }
        ram_.push_back(label);
        if (ram_.size() > budget_) {
            disk_.emplace(wd_->writer<kIdx>(scratch_, Phase::merge));
            for (auto v : ram_) disk_->append(std::uint64_t{v});
            ram_.clear();
            ram_.shrink_to_fit();
        }
    }

    std::size_t size() const noexcept { return size_; }

    template <typename Fn>
    void drain(Fn&& fn) {
        if (disk_) {
            const auto seq = disk_->finalize();
            disk_.reset();
            {
                auto r = wd_->reader(seq, Phase::merge);
                while (auto v = r.next()) fn(*v);
            }
            std::error_code ec;
            std::filesystem::remove(seq.path, ec);
        } else {
            for (auto v : ram_) fn(v);
            ram_.clear();
        }
        size_ = 0;
    }

private:
    Workdir* wd_;
    std::filesystem::path scratch_;
    std::size_t budget_;
    std::vector<std::uint32_t> ram_;
    std::optional<SequenceWriter<kIdx>> disk_;
    std::size_t size_ = 0;
};

void check_partial_columns(const PartialBwtColumns& b) {
    if (b.b.size() != b.k + 1)
        throw Error(ErrorCode::missing_column, "expected " + std::to_string(b.k + 1) + " partial columns, got " +
                                                   std::to_string(b.b.size()));
    for (std::size_t l = 0; l <= b.k; ++l) {
        if (b.b[l].length != b.m)
            throw Error(ErrorCode::length_mismatch, "B_" + std::to_string(l) + " has length " +
                                                        std::to_string(b.b[l].length));
    }
}

QColumns initial_q_columns(const PartialBwtColumns& b, Workdir& wd) {
    QColumns q{1, b.k, {}};
    for (std::size_t l = 1; l <= b.k; ++l) {
        // Counting sort of B_{l-1}: the first symbols of the sorted l-suffixes.
        std::vector<std::uint64_t> counts(b.sigma + 1, 0);
        {
            auto r = wd.reader(b.b[l - 1], Phase::merge);
            while (auto c = r.next()) {
                if (*c > b.sigma)
                    throw Error(ErrorCode::value_out_of_range, "symbol " + std::to_string(*c) + " in B_" +
                                                                   std::to_string(l - 1));
                ++counts[*c];
            }
        }
        auto w = wd.writer<kSym>(wd.file("Q", 1, l), Phase::merge);
        for (std::size_t c = 0; c <= b.sigma; ++c) {
            for (std::uint64_t n = 0; n < counts[c]; ++n) w.append(static_cast<Symbol>(c));
        }
        q.columns.push_back(w.finalize());
    }
    return q;
}

void retire_q(Workdir& wd, const QColumns& q) {
    for (const auto& c : q.columns) wd.retire(c);
}

void verify_label_counts(Workdir& wd, const MergeState& s) {
    std::vector<std::uint64_t> counts(s.k + 1, 0);
    auto r = wd.reader(s.interleave, Phase::merge);
    while (auto j = r.next()) {
        if (*j > s.k) throw Error(ErrorCode::label_out_of_range, "label " + std::to_string(*j));
        ++counts[*j];
    }
    for (std::size_t l = 0; l <= s.k; ++l) {
        if (counts[l] != s.m)
            throw Error(ErrorCode::label_count_mismatch, "I_" + std::to_string(s.p) + " holds label " +
                                                             std::to_string(l) + " " + std::to_string(counts[l]) +
                                                             " times");
    }
}

}  // namespace

const SeqFile<ElementKind::symbol>* QColumns::column(std::size_t l) const {
    if (l < p) return nullptr;
    if (l > k || l - p >= columns.size())
        throw Error(ErrorCode::missing_column, "Q_" + std::to_string(l) + "^" + std::to_string(p));
    return &columns[l - p];
}

MergeState init_merge_state(const PartialBwtColumns& b, Workdir& wd) {
    check_partial_columns(b);
    MergeState s;
    s.p = 0;
    s.m = b.m;
    s.k = b.k;
    s.sigma = b.sigma;
    const std::size_t n = s.positions();

    auto iw = wd.writer<kIdx>(wd.file("I", 0), Phase::merge);
    auto ew = wd.writer<kBit>(wd.file("E", 0), Phase::merge);
    auto lw = wd.writer<kLcp>(wd.file("LCP", 0), Phase::merge);
    for (std::size_t l = 0; l <= s.k; ++l) {
        for (std::size_t i = 0; i < s.m; ++i) iw.append(std::uint64_t{l});
    }
    for (std::size_t i = 0; i < n; ++i) {
        ew.append(i + 1 == n);
        lw.append(std::uint64_t{0});
    }
    s.interleave = iw.finalize();
    s.segments = ew.finalize();
    s.lcp = lw.finalize();
    s.q = initial_q_columns(b, wd);
    s.converged = false;
    return s;
}

MergeState merge_iteration(const MergeState& prev, Workdir& wd, const MergeOptions& options) {
    const std::size_t p = prev.p + 1;
    const std::size_t k = prev.k;
    const std::size_t m = prev.m;
    const std::size_t n = prev.positions();
    if (prev.q.p != p)
        throw Error(ErrorCode::missing_column, "iteration " + std::to_string(p) + " needs Q^" + std::to_string(p) +
                                                   ", state holds Q^" + std::to_string(prev.q.p));
    if (prev.interleave.length != n || prev.segments.length != n || prev.lcp.length != n)
        throw Error(ErrorCode::length_mismatch, "merge state arrays are not (k+1)m long");

    Workdir::require_open_files((k + 1 >= p ? k + 1 - p : 0) + 7 + prev.sigma + 1, "merge iteration");

    auto labels_in = wd.reader(prev.interleave, Phase::merge);
    auto ends_in = wd.reader(prev.segments, Phase::merge);
    auto lcp_in = wd.reader(prev.lcp, Phase::merge);

    // Q_j^p is consumed in rank order of label j, so each column is one forward stream.
    std::vector<std::optional<SequenceReader<kSym>>> q_in(k + 1);
    for (std::size_t l = p; l <= k; ++l) {
        const auto* col = prev.q.column(l);
        if (col->length != m)
            throw Error(ErrorCode::length_mismatch, "Q_" + std::to_string(l) + "^" + std::to_string(p));
        q_in[l].emplace(wd.reader(*col, Phase::merge));
    }

    auto labels_out = wd.writer<kIdx>(wd.file("I", p), Phase::merge);
    auto ends_out = wd.writer<kBit>(wd.file("E", p), Phase::merge);
    auto lcp_out = wd.writer<kLcp>(wd.file("LCP", p), Phase::merge);

    std::vector<RoutingBucket> buckets;
    buckets.reserve(prev.sigma + 1);
    for (std::size_t c = 0; c <= prev.sigma; ++c)
        buckets.emplace_back(wd, wd.file("Lbucket", p, c), options.bucket_spill_bytes);

    std::vector<std::uint64_t> rank(k + 1, 0);
    bool converged = true;
    std::size_t pending = 0;

    const auto flush_segment = [&] {
        for (std::size_t h = 0; h <= prev.sigma; ++h) {
            const std::size_t count = buckets[h].size();
            if (h > 0 && count > 1) converged = false;
            std::size_t r_h = 0;
            buckets[h].drain([&](std::uint32_t label) {
                const auto carried = lcp_in.next();
                if (!carried) throw Error(ErrorCode::length_mismatch, "Lcp_" + std::to_string(p - 1) + " too short");
                labels_out.append(std::uint64_t{label});
                lcp_out.append(std::uint64_t{(h > 0 && r_h > 0) ? static_cast<std::uint32_t>(p) : *carried});
                // Each sentinel-bucket element is its own segment; a letter bucket is one segment.
                ends_out.append(h == 0 || r_h + 1 == count);
                ++r_h;
            });
        }
        pending = 0;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const auto j = labels_in.next();
        const auto end = ends_in.next();
        if (!j || !end) throw Error(ErrorCode::length_mismatch, "I/E inputs ended early");
        if (*j > k) throw Error(ErrorCode::label_out_of_range, "label " + std::to_string(*j) + " > k");
        if (++rank[*j] > m)
            throw Error(ErrorCode::rank_overflow, "label " + std::to_string(*j) + " occurs more than m times");

        Symbol c = kSentinel;
        if (*j >= p) {
            const auto sym = q_in[*j]->next();
            if (!sym) throw Error(ErrorCode::rank_overflow, "Q_" + std::to_string(*j) + " exhausted");
            c = *sym;
        }
        if (c > prev.sigma) throw Error(ErrorCode::value_out_of_range, "symbol " + std::to_string(c));
        buckets[c].push(*j);
        ++pending;
        if (*end) flush_segment();
    }
    if (pending != 0) throw Error(ErrorCode::length_mismatch, "E_" + std::to_string(p - 1) + " does not end a segment at the last position");
    for (std::size_t l = 0; l <= k; ++l) {
        if (rank[l] != m)
            throw Error(ErrorCode::label_count_mismatch,
                        "label " + std::to_string(l) + " occurs " + std::to_string(rank[l]) + " times");
    }

    MergeState next;
    next.p = p;
    next.m = m;
    next.k = k;
    next.sigma = prev.sigma;
    next.interleave = labels_out.finalize();
    next.segments = ends_out.finalize();
    next.lcp = lcp_out.finalize();
    next.q = prev.q;
    next.converged = converged;
    if (options.verify) verify_label_counts(wd, next);
    return next;
}

QColumns compute_q_columns(const PartialBwtColumns& b, const QColumns& q_prev, Workdir& wd) {
    check_partial_columns(b);
    const std::size_t p = q_prev.p + 1;
    QColumns q{p, b.k, {}};
    const std::string bucket_array = "Qbucket_" + std::to_string(p);
    for (std::size_t l = p; l <= b.k; ++l) {
        const auto* src = q_prev.column(l - 1);
        if (src->length != b.m)
            throw Error(ErrorCode::length_mismatch, "Q_" + std::to_string(l - 1) + "^" + std::to_string(q_prev.p));

        BucketSet<kSym> buckets(wd, bucket_array, l, b.sigma + 1, Phase::merge);
        {
            auto keys = wd.reader(b.b[l - 1], Phase::merge);
            auto values = wd.reader(*src, Phase::merge);
            while (auto v = values.next()) {
                const auto key = keys.next();
                buckets.append(*key, *v);
            }
        }
        buckets.finalize();
        q.columns.push_back(concat_buckets(buckets, wd.writer<kSym>(wd.file("Q", p, l), Phase::merge), Phase::merge));
        buckets.retire();
    }
    return q;
}

MergeResult merge_suffixes(const PartialBwtColumns& b, Workdir& wd, const MergeOptions& options) {
    MergeState state = init_merge_state(b, wd);
    MergeResult result;
    const std::size_t cap = b.k + 1;

    while (true) {
        const auto before = wd.stats().snapshot()[Phase::merge];
        MergeState next = merge_iteration(state, wd, options);
        if (!next.converged && next.p < cap) next.q = compute_q_columns(b, next.q, wd);
        result.per_iteration.push_back({next.p, wd.stats().snapshot()[Phase::merge] - before});

        if (options.on_iteration) options.on_iteration(state, next);

        wd.retire(state.interleave);
        wd.retire(state.segments);
        wd.retire(state.lcp);
        if (next.q.p != state.q.p) retire_q(wd, state.q);
        state = std::move(next);
        if (state.converged || state.p >= cap) break;
    }

    result.interleave = state.interleave;
    result.lcp = state.lcp;
    result.iterations = state.p;
    result.final_state = std::move(state);
    return result;
}

}  // namespace extbwt
