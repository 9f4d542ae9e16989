#pragma once

// Phase 1: per-length partial BWT columns B_0..B_k.
//
// B_l[i] is the symbol preceding the i-th smallest l-suffix. The order of the
// l-suffixes (N_l, a permutation of string indices) is derived from N_{l-1}
// by stably bucketing it on B_{l-1} and concatenating the buckets.

#include <cstddef>
#include <functional>
#include <vector>

#include "extbwt/collection.hpp"
#include "extbwt/ext_sequence.hpp"

namespace extbwt {

/// Columns S_0..S_k, one m-long symbol file each. S_l[i] is the symbol
/// preceding the l-suffix of string i; S_k is all sentinels.
struct ColumnMatrix {
    std::size_t m = 0;
    std::vector<SeqFile<ElementKind::symbol>> columns;
};

/// Partial BWT columns B_0..B_k as produced by phase 1 (`B_<l>.bin`).
struct PartialBwtColumns {
    std::size_t m = 0;
    std::size_t k = 0;
    std::size_t sigma = 0;
    std::vector<SeqFile<ElementKind::symbol>> b;
};

struct PartitionOptions {
    /// Re-read every N_l and check it is a permutation of 1..m (O(m) bits of RAM).
    bool verify_permutations = false;
    /// Called with (l, N_l) right after N_l is finalized, before it is retired.
    std::function<void(std::size_t, const SeqFile<ElementKind::index>&)> on_order;
};

/// Single pass over the input writing `S_<l>.bin` for l = 0..k.
ColumnMatrix build_columns(const StringCollection& coll, Workdir& wd);

std::vector<Symbol> load_column(Workdir& wd, const ColumnMatrix& cm, std::size_t l);

/// Stable projection: N_prev[i] goes to the bucket named by B_prev[i].
BucketSet<ElementKind::index> project(Workdir& wd, const SeqFile<ElementKind::index>& n_prev,
                                      const SeqFile<ElementKind::symbol>& b_prev, std::size_t sigma,
                                      std::size_t iteration);

PartialBwtColumns partition_suffixes(const StringCollection& coll, const ColumnMatrix& cm, Workdir& wd,
                                     const PartitionOptions& options = {});

}  // namespace extbwt
