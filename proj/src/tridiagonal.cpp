#include "psdc/tridiagonal.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace psdc {

void TridiagonalMatrix::validate() const {
    if (diag.size() < 1)
        throw std::invalid_argument("tridiagonal: order must be >= 1");
    if (offdiag.size() != diag.size() - 1)
        throw std::invalid_argument("tridiagonal: offdiag length must be n-1");
    if (!diag.allFinite() || !offdiag.allFinite())
        throw std::invalid_argument("tridiagonal: entries must be finite");
}

Eigen::MatrixXd TridiagonalMatrix::dense() const {
    const Eigen::Index n = order();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    a.diagonal() = diag;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        a(i, i + 1) = offdiag[i];
        a(i + 1, i) = offdiag[i];
    }
    return a;
}

TridiagonalMatrix make_clement(Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("make_clement: n must be >= 1");
    TridiagonalMatrix t;
    t.diag = Eigen::VectorXd::Zero(n + 1);
    t.offdiag.resize(n);
    for (Eigen::Index i = 1; i <= n; ++i)
        t.offdiag[i - 1] = std::sqrt(double(i) * double(n + 1 - i));
    return t;
}

TridiagonalMatrix make_hermite(Eigen::Index n) {
    if (n < 2) throw std::invalid_argument("make_hermite: n must be >= 2");
    TridiagonalMatrix t;
    t.diag = Eigen::VectorXd::Zero(n);
    t.offdiag.resize(n - 1);
    for (Eigen::Index i = 1; i < n; ++i) t.offdiag[i - 1] = std::sqrt(double(i));
    return t;
}

TridiagonalMatrix make_toeplitz_type(Eigen::Index n) {
    if (n < 2) throw std::invalid_argument("make_toeplitz_type: n must be >= 2");
    TridiagonalMatrix t;
    t.diag = Eigen::VectorXd::Constant(n, 2.0);
    t.offdiag = Eigen::VectorXd::Constant(n - 1, 1.0);
    return t;
}

double sht_diag_term(Eigen::Index l, Eigen::Index m) {
    const double dl = double(l), dm = double(m);
    return (2.0 * dl * (dl + 1.0) - 2.0 * dm * dm - 1.0) /
           ((2.0 * dl - 1.0) * (2.0 * dl + 3.0));
}

double sht_offdiag_term(Eigen::Index l, Eigen::Index m) {
    const double dl = double(l), dm = double(m);
    const double x = dl - dm;
    const double num = (x + 1.0) * (x + 2.0) * (dl + dm + 1.0) * (dl + dm + 2.0);
    const double den = (2.0 * dl + 1.0) * (2.0 * dl + 3.0) * (2.0 * dl + 3.0) *
                       (2.0 * dl + 5.0);
    return std::sqrt(num / den);
}

TridiagonalMatrix make_sht(Eigen::Index n, Eigen::Index m) {
    if (n < 2) throw std::invalid_argument("make_sht: n must be >= 2");
    if (m < 0) throw std::invalid_argument("make_sht: m must be >= 0");
    TridiagonalMatrix t;
    t.diag.resize(n);
    t.offdiag.resize(n - 1);
    for (Eigen::Index j = 0; j < n; ++j) t.diag[j] = sht_diag_term(m + 2 * j, m);
    for (Eigen::Index j = 0; j + 1 < n; ++j)
        t.offdiag[j] = sht_offdiag_term(m + 2 * j, m);
    return t;
}

TridiagonalMatrix read_tridiagonal(std::istream& in) {
    Eigen::Index n = 0;
    if (!(in >> n) || n < 1)
        throw std::invalid_argument("tridiagonal file: bad order");
    TridiagonalMatrix t;
    t.diag.resize(n);
    t.offdiag.resize(n - 1);
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(in >> t.diag[i]))
            throw std::invalid_argument("tridiagonal file: short diagonal");
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        if (!(in >> t.offdiag[i]))
            throw std::invalid_argument("tridiagonal file: short off-diagonal");
    t.validate();
    return t;
}

TridiagonalMatrix read_tridiagonal_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return read_tridiagonal(in);
}

void write_tridiagonal(std::ostream& out, const TridiagonalMatrix& t) {
    t.validate();
    out << t.order() << '\n';
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < t.diag.size(); ++i)
        out << (i ? " " : "") << t.diag[i];
    out << '\n';
    for (Eigen::Index i = 0; i < t.offdiag.size(); ++i)
        out << (i ? " " : "") << t.offdiag[i];
    out << '\n';
}

void write_tridiagonal_file(const std::string& path, const TridiagonalMatrix& t) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path);
    write_tridiagonal(out, t);
}

}  // namespace psdc
