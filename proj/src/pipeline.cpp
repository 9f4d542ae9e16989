#include "extbwt/pipeline.hpp"

namespace extbwt {

BuildResult build_bwt(const StringCollection& coll, Workdir& wd, const BuildOptions& options) {
    BuildResult result;
    const ColumnMatrix columns = build_columns(coll, wd);
    result.partial = partition_suffixes(coll, columns, wd, options.partition);
    result.merge = merge_suffixes(result.partial, wd, options.merge);

    // The segment bitmap and the stale Q columns are not needed past convergence.
    wd.retire(result.merge.final_state.segments);
    for (const auto& q : result.merge.final_state.q.columns) wd.retire(q);

    result.output = emit_outputs(result.merge.interleave, result.merge.lcp, result.partial,
                                 result.merge.iterations, wd);
    return result;
}

}  // namespace extbwt
