#include "psdc/cauchy.hpp"

#include <random>
#include <stdexcept>

namespace psdc {

CauchyLike CauchyLike::from_nodes(Eigen::VectorXd u, Eigen::VectorXd v,
                                  Eigen::VectorXd d, Eigen::VectorXd w) {
    if (u.size() != d.size() || v.size() != w.size())
        throw std::invalid_argument("CauchyLike: generator size mismatch");
    CauchyLike c;
    auto nodes = std::make_shared<Nodes>();
    nodes->mode = DiffMode::naive;
    nodes->d = std::move(d);
    nodes->w = std::move(w);
    c.nodes_ = std::move(nodes);
    c.u_ = std::move(u);
    c.v_ = std::move(v);
    c.mode_ = DiffMode::naive;
    c.row_ids_.resize(size_t(c.u_.size()));
    c.col_ids_.resize(size_t(c.v_.size()));
    for (size_t i = 0; i < c.row_ids_.size(); ++i) c.row_ids_[i] = Eigen::Index(i);
    for (size_t j = 0; j < c.col_ids_.size(); ++j) c.col_ids_[j] = Eigen::Index(j);
    return c;
}

CauchyLike CauchyLike::from_generators(const QhatGenerators& g) {
    CauchyLike c;
    auto nodes = std::make_shared<Nodes>();
    nodes->mode = DiffMode::gap;
    nodes->d = g.d;
    nodes->gamma = g.gamma;
    nodes->mu = g.mu;
    c.nodes_ = std::move(nodes);
    c.u_ = g.u;
    c.v_ = g.v;
    c.mode_ = DiffMode::gap;
    c.row_ids_.resize(size_t(g.size()));
    c.col_ids_.resize(size_t(g.size()));
    for (size_t i = 0; i < c.row_ids_.size(); ++i) c.row_ids_[i] = Eigen::Index(i);
    for (size_t j = 0; j < c.col_ids_.size(); ++j) c.col_ids_[j] = Eigen::Index(j);
    return c;
}

double CauchyLike::cross_diff_ids(Eigen::Index rid, Eigen::Index cid) const {
    const Nodes& n = *nodes_;
    if (n.mode == DiffMode::naive) return n.d[rid] - n.w[cid];
    // d_r - lam_c through the gap representation.
    if (rid <= cid) return (n.d[rid] - n.d[cid]) - n.gamma[cid];
    return (n.d[rid] - n.d[cid + 1]) + n.mu[cid];
}

double CauchyLike::col_diff_ids(Eigen::Index cid, Eigen::Index cid2) const {
    const Nodes& n = *nodes_;
    if (n.mode == DiffMode::naive) return n.w[cid] - n.w[cid2];
    if (cid == cid2) return 0.0;
    // lam_c - lam_c2 = gamma_c + (d_c - lam_c2): both addends share a sign.
    if (cid > cid2) return n.gamma[cid] + cross_diff_ids(cid, cid2);
    return -(n.gamma[cid2] + cross_diff_ids(cid2, cid));
}

double CauchyLike::cross_diff(Eigen::Index i, Eigen::Index j) const {
    return cross_diff_ids(row_ids_[size_t(i)], col_ids_[size_t(j)]);
}

double CauchyLike::row_node_diff(Eigen::Index i, Eigen::Index i2) const {
    return nodes_->d[row_ids_[size_t(i)]] - nodes_->d[row_ids_[size_t(i2)]];
}

double CauchyLike::col_node_diff(Eigen::Index j, Eigen::Index j2) const {
    return col_diff_ids(col_ids_[size_t(j)], col_ids_[size_t(j2)]);
}

double CauchyLike::entry(Eigen::Index i, Eigen::Index j) const {
    const double diff = cross_diff(i, j);
    if (diff == 0.0)
        throw std::runtime_error("CauchyLike: pole d_i == w_j on the grid");
    return u_[i] * v_[j] / diff;
}

CauchyLike CauchyLike::submatrix(std::span<const Eigen::Index> row_subset,
                                 std::span<const Eigen::Index> col_subset) const {
    CauchyLike c;
    c.nodes_ = nodes_;
    c.mode_ = mode_;
    c.row_ids_.reserve(row_subset.size());
    c.col_ids_.reserve(col_subset.size());
    c.u_.resize(Eigen::Index(row_subset.size()));
    c.v_.resize(Eigen::Index(col_subset.size()));
    for (size_t i = 0; i < row_subset.size(); ++i) {
        c.row_ids_.push_back(row_ids_[size_t(row_subset[i])]);
        c.u_[Eigen::Index(i)] = u_[row_subset[i]];
    }
    for (size_t j = 0; j < col_subset.size(); ++j) {
        c.col_ids_.push_back(col_ids_[size_t(col_subset[j])]);
        c.v_[Eigen::Index(j)] = v_[col_subset[j]];
    }
    return c;
}

Eigen::MatrixXd CauchyLike::dense() const {
    Eigen::MatrixXd a(rows(), cols());
    for (Eigen::Index j = 0; j < cols(); ++j)
        for (Eigen::Index i = 0; i < rows(); ++i) a(i, j) = entry(i, j);
    return a;
}

CauchyLike make_example0(Eigen::Index n, std::uint64_t seed) {
    const double a = 1.0, b = 9.0;
    Eigen::VectorXd u(n), v(n), d(n), w(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = unif(rng);
    for (Eigen::Index j = 0; j < n; ++j) v[j] = unif(rng);
    for (Eigen::Index i = 0; i < n; ++i) {
        d[i] = double(i + 1) * (b - a) / double(n);
        w[i] = d[i] + (b - a) / (2.0 * double(n));
    }
    return CauchyLike::from_nodes(std::move(u), std::move(v), std::move(d),
                                  std::move(w));
}

}  // namespace psdc
