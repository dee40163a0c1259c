#ifndef PSDC_DIST_MATRIX_HPP
#define PSDC_DIST_MATRIX_HPP

#include <vector>

#include <Eigen/Dense>

#include "psdc/grid.hpp"
#include "psdc/layout.hpp"

namespace psdc {

/// Block-cyclic distributed dense matrix.  `local[r]` holds the cyclically
/// compacted tile of rank r.  `col_shift` tracks how far the tiles have been
/// rotated leftward along process rows: rank (i, j) holds the tile whose home
/// is process column (j + col_shift) mod q.
struct DistMatrix {
    BlockCyclicLayout layout;
    std::vector<Eigen::MatrixXd> local;
    int col_shift = 0;

    static DistMatrix zeros(const BlockCyclicLayout& layout);
    static DistMatrix scatter(const Eigen::MatrixXd& a,
                              const BlockCyclicLayout& layout);

    /// Home process column of the tile currently held by process column pc.
    int held_home_col(int pc) const;

    Eigen::MatrixXd gather() const;
    double at(Eigen::Index gi, Eigen::Index gj) const;
    void set(Eigen::Index gi, Eigen::Index gj, double value);
};

/// Cyclic tile rotation: every rank sends its entire local tile one process
/// column to the left within its row.  q applications restore the original
/// placement bit for bit.
DistMatrix shift_left(const DistMatrix& dm, GridStats* stats = nullptr,
                      Schedule schedule = Schedule::sequential);

/// Layout-to-layout copy (the PDGEMR2D role): every entry moves to its owner
/// under `target`; entries already in place move no bytes.
DistMatrix redistribute(const DistMatrix& dm, const BlockCyclicLayout& target,
                        GridStats* stats = nullptr,
                        Schedule schedule = Schedule::sequential);

}  // namespace psdc

#endif
