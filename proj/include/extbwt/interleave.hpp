#pragma once

// Interleave reconstruction from an encoding, and final output emission.
//
// An encoding labels each merged position with the part it came from; the
// q-th position takes the next unread element of part I[q]. One forward
// reader per part is kept open for the whole pass.

#include <cstdint>
#include <string>
#include <vector>

#include "extbwt/ext_sequence.hpp"
#include "extbwt/partition.hpp"

namespace extbwt {

template <ElementKind K>
struct InterleaveInput {
    std::vector<SeqFile<K>> parts;
    SeqFile<ElementKind::index> encoding;
};

template <ElementKind K>
SeqFile<K> reconstruct_interleave(const InterleaveInput<K>& input, Workdir& wd, const std::filesystem::path& out,
                                  Phase phase = Phase::emit) {
    Workdir::require_open_files(input.parts.size() + 2, "interleave reconstruction");
    std::uint64_t total = 0;
    for (const auto& part : input.parts) total += part.length;
    if (total != input.encoding.length)
        throw Error(ErrorCode::label_count_mismatch, "encoding has " + std::to_string(input.encoding.length) +
                                                         " labels for " + std::to_string(total) + " part elements");

    std::vector<SequenceReader<K>> readers;
    readers.reserve(input.parts.size());
    for (const auto& part : input.parts) readers.push_back(wd.reader(part, phase));

    auto labels = wd.reader(input.encoding, phase);
    auto w = wd.writer<K>(out, phase);
    while (auto label = labels.next()) {
        if (*label >= readers.size())
            throw Error(ErrorCode::label_out_of_range, "label " + std::to_string(*label) + " with " +
                                                           std::to_string(readers.size()) + " parts");
        const auto v = readers[*label].next();
        if (!v)
            throw Error(ErrorCode::label_count_mismatch,
                        "label " + std::to_string(*label) + " occurs more often than its part is long");
        w.append(*v);
    }
    for (std::size_t i = 0; i < readers.size(); ++i) {
        if (readers[i].remaining() != 0)
            throw Error(ErrorCode::label_count_mismatch, "part " + std::to_string(i) + " not fully consumed");
    }
    return w.finalize();
}

/// Stored in place of LCP[1], which is -1 by convention.
inline constexpr std::uint32_t kLcpUndefined = 0xFFFFFFFFu;

struct OutputBundle {
    std::size_t m = 0;
    std::size_t k = 0;
    std::size_t sigma = 0;
    SeqFile<ElementKind::symbol> bwt;   // (k+1)m symbol codes
    SeqFile<ElementKind::lcpval> lcp;   // (k+1)m values, first one kLcpUndefined
    std::size_t iterations = 0;
    IoSnapshot io;
};

/// BWT = interleave of B_0..B_k under `encoding`; LCP copied with position 1 set to -1.
OutputBundle emit_outputs(const SeqFile<ElementKind::index>& encoding, const SeqFile<ElementKind::lcpval>& lcp,
                          const PartialBwtColumns& b, std::size_t iterations, Workdir& wd);

std::vector<Symbol> read_bwt(Workdir& wd, const OutputBundle& out);
std::vector<std::int64_t> read_lcp(Workdir& wd, const OutputBundle& out);

}  // namespace extbwt
