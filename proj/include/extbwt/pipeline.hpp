#pragma once

#include <filesystem>

#include "extbwt/collection.hpp"
#include "extbwt/ext_sequence.hpp"
#include "extbwt/interleave.hpp"
#include "extbwt/merge.hpp"
#include "extbwt/partition.hpp"

namespace extbwt {

struct BuildOptions {
    PartitionOptions partition;
    MergeOptions merge;
};

struct BuildResult {
    PartialBwtColumns partial;
    MergeResult merge;
    OutputBundle output;
};

/// Both phases plus emission inside `wd`. The final encoding (`I_<p>.bin`),
/// Lcp and `B_<l>.bin` files stay in the workdir; other scratch files are
/// retired according to the workdir's rolling option.
BuildResult build_bwt(const StringCollection& coll, Workdir& wd, const BuildOptions& options = {});

}  // namespace extbwt
