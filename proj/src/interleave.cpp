#include "extbwt/interleave.hpp"

namespace extbwt {

OutputBundle emit_outputs(const SeqFile<ElementKind::index>& encoding, const SeqFile<ElementKind::lcpval>& lcp,
                          const PartialBwtColumns& b, std::size_t iterations, Workdir& wd) {
    OutputBundle out;
    out.m = b.m;
    out.k = b.k;
    out.sigma = b.sigma;
    out.iterations = iterations;
    out.bwt = reconstruct_interleave(InterleaveInput<ElementKind::symbol>{b.b, encoding}, wd, wd.root() / "bwt.bin");

    if (lcp.length != encoding.length)
        throw Error(ErrorCode::length_mismatch, "LCP and encoding lengths differ");
    auto r = wd.reader(lcp, Phase::emit);
    auto w = wd.writer<ElementKind::lcpval>(wd.root() / "lcp.bin", Phase::emit);
    bool first = true;
    while (auto v = r.next()) {
        w.append(std::uint64_t{first ? kLcpUndefined : *v});
        first = false;
    }
    out.lcp = w.finalize();
    out.io = wd.stats().snapshot();
    return out;
}

std::vector<Symbol> read_bwt(Workdir& wd, const OutputBundle& out) {
    return load_all(wd, out.bwt, Phase::emit);
}

std::vector<std::int64_t> read_lcp(Workdir& wd, const OutputBundle& out) {
    std::vector<std::int64_t> lcp;
    lcp.reserve(static_cast<std::size_t>(out.lcp.length));
    auto r = wd.reader(out.lcp, Phase::emit);
    while (auto v = r.next()) lcp.push_back(*v == kLcpUndefined ? -1 : static_cast<std::int64_t>(*v));
    return lcp;
}

}  // namespace extbwt
