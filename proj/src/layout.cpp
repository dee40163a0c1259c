#include "psdc/layout.hpp"

#include <stdexcept>

namespace psdc {

namespace {

// numroc: number of indices a process owns in one cyclic dimension.
Eigen::Index cyclic_count(Eigen::Index n, Eigen::Index nb, int proc, int src,
                          int nprocs) {
    if (n == 0) return 0;
    const Eigen::Index nblocks = (n + nb - 1) / nb;
    // Owned blocks are those congruent to r = proc - src (mod nprocs).
    const Eigen::Index r = ((proc - src) % nprocs + nprocs) % nprocs;
    if (r >= nblocks) return 0;
    const Eigen::Index nown = (nblocks - 1 - r) / nprocs + 1;
    Eigen::Index count = nown * nb;
    const Eigen::Index last = nblocks - 1;
    if (last % nprocs == r) count -= nblocks * nb - n;  // trailing partial block
    return count;
}

Eigen::Index local_from_global(Eigen::Index g, Eigen::Index nb, int nprocs) {
    const Eigen::Index blk = g / nb;
    return (blk / nprocs) * nb + (g % nb);
}

Eigen::Index global_from_local(Eigen::Index l, Eigen::Index nb, int proc,
                               int src, int nprocs) {
    const Eigen::Index lblk = l / nb;
    const Eigen::Index r = ((proc - src) % nprocs + nprocs) % nprocs;
    return (lblk * nprocs + r) * nb + (l % nb);
}

}  // namespace

void BlockCyclicLayout::validate() const {
    if (m < 0 || n < 0 || nb < 1 || grid.p < 1 || grid.q < 1)
        throw std::invalid_argument("layout: bad dimensions");
    if (src_row < 0 || src_row >= grid.p || src_col < 0 || src_col >= grid.q)
        throw std::invalid_argument("layout: bad source process");
}

int BlockCyclicLayout::owner_row(Eigen::Index gi) const {
    return int((gi / nb + src_row) % grid.p);
}

int BlockCyclicLayout::owner_col(Eigen::Index gj) const {
    return int((gj / nb + src_col) % grid.q);
}

int BlockCyclicLayout::owner_rank(Eigen::Index gi, Eigen::Index gj) const {
    return grid.rank_of(owner_row(gi), owner_col(gj));
}

Eigen::Index BlockCyclicLayout::local_row(Eigen::Index gi) const {
    return local_from_global(gi, nb, grid.p);
}

Eigen::Index BlockCyclicLayout::local_col(Eigen::Index gj) const {
    return local_from_global(gj, nb, grid.q);
}

Eigen::Index BlockCyclicLayout::global_row(int pr, Eigen::Index li) const {
    return global_from_local(li, nb, pr, src_row, grid.p);
}

Eigen::Index BlockCyclicLayout::global_col(int pc, Eigen::Index lj) const {
    return global_from_local(lj, nb, pc, src_col, grid.q);
}

Eigen::Index BlockCyclicLayout::local_rows(int pr) const {
    return cyclic_count(m, nb, pr, src_row, grid.p);
}

Eigen::Index BlockCyclicLayout::local_cols(int pc) const {
    return cyclic_count(n, nb, pc, src_col, grid.q);
}

std::vector<Eigen::Index> BlockCyclicLayout::owned_rows(int pr) const {
    std::vector<Eigen::Index> out;
    out.reserve(size_t(local_rows(pr)));
    for (Eigen::Index blk = 0; blk * nb < m; ++blk) {
        if (int((blk + src_row) % grid.p) != pr) continue;
        const Eigen::Index lo = blk * nb;
        const Eigen::Index hi = std::min(lo + nb, m);
        for (Eigen::Index g = lo; g < hi; ++g) out.push_back(g);
    }
    return out;
}

std::vector<Eigen::Index> BlockCyclicLayout::owned_cols(int pc) const {
    std::vector<Eigen::Index> out;
    out.reserve(size_t(local_cols(pc)));
    for (Eigen::Index blk = 0; blk * nb < n; ++blk) {
        if (int((blk + src_col) % grid.q) != pc) continue;
        const Eigen::Index lo = blk * nb;
        const Eigen::Index hi = std::min(lo + nb, n);
        for (Eigen::Index g = lo; g < hi; ++g) out.push_back(g);
    }
    return out;
}

bool BlockCyclicLayout::is_bdd() const {
    const Eigen::Index row_need = (m + grid.p - 1) / grid.p;
    const Eigen::Index col_need = (n + grid.q - 1) / grid.q;
    return nb >= row_need && nb >= col_need;
}

Eigen::Index BlockCyclicLayout::bdd_block(Eigen::Index m, Eigen::Index n,
                                          const GridShape& g) {
    const Eigen::Index row_need = (m + g.p - 1) / g.p;
    const Eigen::Index col_need = (n + g.q - 1) / g.q;
    return std::max<Eigen::Index>(1, std::max(row_need, col_need));
}

OwnerLocal owner_and_local(const BlockCyclicLayout& layout, Eigen::Index gi,
                           Eigen::Index gj) {
    if (gi < 0 || gi >= layout.m || gj < 0 || gj >= layout.n)
        throw std::invalid_argument("owner_and_local: index out of range");
    return OwnerLocal{layout.owner_rank(gi, gj), layout.local_row(gi),
                      layout.local_col(gj)};
}

}  // namespace psdc
