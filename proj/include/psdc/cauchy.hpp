#ifndef PSDC_CAUCHY_HPP
#define PSDC_CAUCHY_HPP

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "psdc/secular.hpp"

namespace psdc {

enum class DiffMode { naive, gap };

/// Cauchy-like matrix A(i,j) = u_i * v_j / (d_i - w_j), held entirely through
/// its generator vectors.  In gap mode the column nodes are the secular roots
/// lam_j = d_j + gamma_j and every node difference is formed through the
/// gamma/mu gap representation, so entries stay accurate when roots cluster
/// against poles.  Submatrix views share the node data and remain Cauchy-like.
class CauchyLike {
public:
    /// Naive mode from explicit nodes.
    static CauchyLike from_nodes(Eigen::VectorXd u, Eigen::VectorXd v,
                                 Eigen::VectorXd d, Eigen::VectorXd w);

    /// Gap mode from the five-generator secular representation.
    static CauchyLike from_generators(const QhatGenerators& g);

    Eigen::Index rows() const { return Eigen::Index(row_ids_.size()); }
    Eigen::Index cols() const { return Eigen::Index(col_ids_.size()); }
    DiffMode mode() const { return mode_; }

    double u(Eigen::Index i) const { return u_[i]; }
    double v(Eigen::Index j) const { return v_[j]; }

    /// u_i * v_j / (d_i - w_j); throws on an exact pole in naive mode.
    double entry(Eigen::Index i, Eigen::Index j) const;

    /// d_i - w_j through the mode's difference kernel.
    double cross_diff(Eigen::Index i, Eigen::Index j) const;
    /// d_i - d_i2.
    double row_node_diff(Eigen::Index i, Eigen::Index i2) const;
    /// w_j - w_j2.
    double col_node_diff(Eigen::Index j, Eigen::Index j2) const;

    /// View of a row/column subset; indices refer to this matrix.
    CauchyLike submatrix(std::span<const Eigen::Index> row_subset,
                         std::span<const Eigen::Index> col_subset) const;

    Eigen::MatrixXd dense() const;

private:
    struct Nodes {
        DiffMode mode = DiffMode::naive;
        Eigen::VectorXd d;      // row nodes
        Eigen::VectorXd w;      // column nodes (naive mode)
        Eigen::VectorXd gamma;  // gap mode: lam_j - d_j
        Eigen::VectorXd mu;     // gap mode: d_{j+1} - lam_j
    };

    double cross_diff_ids(Eigen::Index rid, Eigen::Index cid) const;
    double col_diff_ids(Eigen::Index cid, Eigen::Index cid2) const;

    std::shared_ptr<const Nodes> nodes_;
    std::vector<Eigen::Index> row_ids_;  // positions into node arrays
    std::vector<Eigen::Index> col_ids_;
    Eigen::VectorXd u_;
    Eigen::VectorXd v_;
    DiffMode mode_ = DiffMode::naive;
};

/// Example-0 generators: u, v random in [0,1) from `seed`, d_i = i*(b-a)/n,
/// w_j = d_j + (b-a)/(2n) for i,j = 1..n with a = 1, b = 9.
CauchyLike make_example0(Eigen::Index n, std::uint64_t seed);

}  // namespace psdc

#endif
