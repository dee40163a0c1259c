#ifndef PSDC_LAYOUT_HPP
#define PSDC_LAYOUT_HPP

#include <vector>

#include <Eigen/Dense>

namespace psdc {

struct GridShape {
    int p = 1;
    int q = 1;
    int ranks() const { return p * q; }
    int rank_of(int pr, int pc) const { return pr * q + pc; }
    int row_of(int rank) const { return rank / q; }
    int col_of(int rank) const { return rank % q; }
};

/// Two-dimensional block-cyclic layout: global block (I, J) of size nb
/// belongs to process ((I + src_row) mod p, (J + src_col) mod q), and local
/// indices compact the owned blocks in order.  Trailing partial blocks are
/// allowed on both sides.
struct BlockCyclicLayout {
    Eigen::Index m = 0, n = 0;
    Eigen::Index nb = 1;
    GridShape grid;
    int src_row = 0, src_col = 0;

    int owner_row(Eigen::Index gi) const;
    int owner_col(Eigen::Index gj) const;
    int owner_rank(Eigen::Index gi, Eigen::Index gj) const;

    Eigen::Index local_row(Eigen::Index gi) const;
    Eigen::Index local_col(Eigen::Index gj) const;
    Eigen::Index global_row(int pr, Eigen::Index li) const;
    Eigen::Index global_col(int pc, Eigen::Index lj) const;

    /// Number of local rows/cols a process row/column owns (cf. numroc).
    Eigen::Index local_rows(int pr) const;
    Eigen::Index local_cols(int pc) const;

    /// Sorted global indices owned by one process row/column.
    std::vector<Eigen::Index> owned_rows(int pr) const;
    std::vector<Eigen::Index> owned_cols(int pc) const;

    /// True when every process owns at most one contiguous block per side.
    bool is_bdd() const;

    /// Block size that turns this grid into a plain 2-D block distribution.
    static Eigen::Index bdd_block(Eigen::Index m, Eigen::Index n,
                                  const GridShape& g);

    void validate() const;
};

struct OwnerLocal {
    int rank = 0;
    Eigen::Index li = 0;
    Eigen::Index lj = 0;
};

/// Owner process and local indices of a global entry.
OwnerLocal owner_and_local(const BlockCyclicLayout& layout, Eigen::Index gi,
                           Eigen::Index gj);

}  // namespace psdc

#endif
