#include "extbwt/partition.hpp"

#include <string>

namespace extbwt {

namespace {

constexpr auto kSym = ElementKind::symbol;
constexpr auto kIdx = ElementKind::index;

void check_permutation(Workdir& wd, const SeqFile<kIdx>& order, std::size_t m, std::size_t l) {
    if (order.length != m)
        throw Error(ErrorCode::length_mismatch, "N_" + std::to_string(l) + " has wrong length");
    std::vector<bool> seen(m + 1, false);
    auto r = wd.reader(order, Phase::partition);
    while (auto v = r.next()) {
        if (*v == 0 || *v > m || seen[*v])
            throw Error(ErrorCode::length_mismatch,
                        "N_" + std::to_string(l) + " is not a permutation (entry " + std::to_string(*v) + ")");
        seen[*v] = true;
    }
}

SeqFile<kSym> write_partial_column(Workdir& wd, const SeqFile<kIdx>& order, const std::vector<Symbol>& column,
                                   std::size_t l) {
    auto out = wd.writer<kSym>(wd.file("B", l), Phase::partition);
    auto r = wd.reader(order, Phase::partition);
    while (auto idx = r.next()) out.append(column[*idx - 1]);
    return out.finalize();
}

}  // namespace

ColumnMatrix build_columns(const StringCollection& coll, Workdir& wd) {
    const std::size_t m = coll.m();
    const std::size_t k = coll.k();
    std::vector<SequenceWriter<kSym>> writers;
    writers.reserve(k + 1);
    for (std::size_t l = 0; l <= k; ++l) writers.push_back(wd.writer<kSym>(wd.file("S", l), Phase::partition));

    for (std::size_t i = 1; i <= m; ++i) {
        const auto s = coll.string(i);
        for (std::size_t l = 0; l < k; ++l) writers[l].append(s[k - 1 - l]);
        writers[k].append(kSentinel);
    }

    ColumnMatrix cm{m, {}};
    cm.columns.reserve(k + 1);
    for (auto& w : writers) cm.columns.push_back(w.finalize());
    return cm;
}

std::vector<Symbol> load_column(Workdir& wd, const ColumnMatrix& cm, std::size_t l) {
    if (l >= cm.columns.size()) throw Error(ErrorCode::missing_column, "S_" + std::to_string(l));
    auto column = load_all(wd, cm.columns[l], Phase::partition);
    if (column.size() != cm.m) throw Error(ErrorCode::length_mismatch, "S_" + std::to_string(l));
    return column;
}

BucketSet<kIdx> project(Workdir& wd, const SeqFile<kIdx>& n_prev, const SeqFile<kSym>& b_prev, std::size_t sigma,
                        std::size_t iteration) {
    if (n_prev.length != b_prev.length)
        throw Error(ErrorCode::length_mismatch, "projection inputs differ in length: " +
                                                    std::to_string(n_prev.length) + " vs " +
                                                    std::to_string(b_prev.length));
    BucketSet<kIdx> buckets(wd, "Nbucket", iteration, sigma + 1, Phase::partition);
    auto n = wd.reader(n_prev, Phase::partition);
    auto b = wd.reader(b_prev, Phase::partition);
    while (auto idx = n.next()) {
        const auto c = b.next();
        buckets.append(*c, *idx);
    }
    buckets.finalize();
    return buckets;
}

PartialBwtColumns partition_suffixes(const StringCollection& coll, const ColumnMatrix& cm, Workdir& wd,
                                     const PartitionOptions& options) {
    const std::size_t m = coll.m();
    const std::size_t k = coll.k();
    if (cm.m != m || cm.columns.size() != k + 1)
        throw Error(ErrorCode::missing_column, "column matrix does not match the collection");

    PartialBwtColumns out{m, k, coll.sigma(), {}};
    out.b.reserve(k + 1);

    SeqFile<kIdx> order;
    {
        auto w = wd.writer<kIdx>(wd.file("N", 0), Phase::partition);
        for (std::size_t i = 1; i <= m; ++i) w.append(std::uint64_t{i});
        order = w.finalize();
    }
    if (options.on_order) options.on_order(0, order);
    out.b.push_back(write_partial_column(wd, order, load_column(wd, cm, 0), 0));
    wd.retire(cm.columns[0]);

    for (std::size_t l = 1; l <= k; ++l) {
        const auto buckets = project(wd, order, out.b[l - 1], coll.sigma(), l);
        auto next = concat_buckets(buckets, wd.writer<kIdx>(wd.file("N", l), Phase::partition), Phase::partition);
        buckets.retire();
        wd.retire(order);
        order = std::move(next);

        if (options.verify_permutations) check_permutation(wd, order, m, l);
        if (options.on_order) options.on_order(l, order);

        // Only S_l is resident while B_l is written.
        out.b.push_back(write_partial_column(wd, order, load_column(wd, cm, l), l));
        wd.retire(cm.columns[l]);
    }
    wd.retire(order);
    return out;
}

}  // namespace extbwt
