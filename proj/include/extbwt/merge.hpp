#pragma once

// Phase 2: refine the interleave encoding of all suffixes by increasing
// prefix depth p, computing the LCP array on the way.
//
// Iteration p reads I_{p-1} (suffix-length labels), E_{p-1} (segment ends)
// and Lcp_{p-1} in one coordinated scan. Inside each (p-1)-segment every
// label j is routed to the bucket of the p-th symbol of its next suffix,
// fetched from column Q_j^p at the running rank of j. Flushing the buckets
// in symbol order yields I_p, E_p and Lcp_p for that segment.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "extbwt/ext_sequence.hpp"
#include "extbwt/partition.hpp"

namespace extbwt {

/// Q_l^p for l = p..k: the p-th symbol of every sorted l-suffix.
/// Columns with l < p are exhausted and read as sentinels; they are never stored.
struct QColumns {
    std::size_t p = 1;
    std::size_t k = 0;
    std::vector<SeqFile<ElementKind::symbol>> columns;  // columns[l - p]

    /// Column for label l, or nullptr when l < p (implicit sentinels).
    const SeqFile<ElementKind::symbol>* column(std::size_t l) const;
};

struct MergeState {
    std::size_t p = 0;
    std::size_t m = 0;
    std::size_t k = 0;
    std::size_t sigma = 0;
    SeqFile<ElementKind::index> interleave;  // I_p
    SeqFile<ElementKind::bit> segments;      // E_p
    SeqFile<ElementKind::lcpval> lcp;        // Lcp_p
    /// Columns consumed by the next iteration; q.p == p + 1 when current.
    QColumns q;
    bool converged = false;

    std::size_t positions() const noexcept { return (k + 1) * m; }
};

struct MergeOptions {
    /// RAM budget per routing bucket, in bytes; larger buckets spill to disk.
    std::size_t bucket_spill_bytes = std::size_t{1} << 20;
    /// Check label conservation after every iteration.
    bool verify = false;
    /// Called with (previous, next) after each iteration, before retiring files.
    std::function<void(const MergeState&, const MergeState&)> on_iteration;
};

struct IterationIo {
    std::size_t p = 0;
    PhaseIo io;  // iteration p plus the Q columns it produced for p + 1
};

struct MergeResult {
    SeqFile<ElementKind::index> interleave;
    SeqFile<ElementKind::lcpval> lcp;
    std::size_t iterations = 0;
    std::vector<IterationIo> per_iteration;
    /// Last state; its I/E/Lcp/Q files are still on disk.
    MergeState final_state;
};

/// I_0 = m zeros, m ones, ..., m k's; E_0 a single segment; Lcp_0 zero; Q^1.
MergeState init_merge_state(const PartialBwtColumns& b, Workdir& wd);

/// One refinement pass using `prev.q` (which must hold Q^{prev.p + 1}).
/// The returned state carries the same Q columns; advance them with compute_q_columns.
MergeState merge_iteration(const MergeState& prev, Workdir& wd, const MergeOptions& options = {});

/// Q^{q_prev.p + 1} from Q^{q_prev.p}: for l, bucket Q_{l-1} on B_{l-1} and concatenate.
QColumns compute_q_columns(const PartialBwtColumns& b, const QColumns& q_prev, Workdir& wd);

/// Iterates until every segment has width 1 or p reaches k + 1.
MergeResult merge_suffixes(const PartialBwtColumns& b, Workdir& wd, const MergeOptions& options = {});

}  // namespace extbwt
