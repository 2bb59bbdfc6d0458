#include "ttsketch/linalg.hpp"

#include "ttsketch/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ttsketch {

namespace {

using ColMajor = Eigen::MatrixXd;

void require_nonempty(const Matrix& a, const char* what)
{
    if (a.rows() == 0 || a.cols() == 0) {
        throw ShapeError(std::string(what) + ": empty matrix");
    }
}

}  // namespace

void require_finite(std::span<const double> values, const char* what)
{
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw NumericInputError(std::string(what) + ": non-finite input value");
        }
    }
}

SvdResult svd(const Matrix& a)
{
    require_nonempty(a, "svd");
    require_finite(a.values(), "svd");

    const ColMajor dense = a.view();
    Eigen::BDCSVD<ColMajor> solver(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);

    const Eigen::Index k = std::min(dense.rows(), dense.cols());
    RowMajorMatrix u = solver.matrixU().leftCols(k);
    RowMajorMatrix vt = solver.matrixV().leftCols(k).transpose();
    const Eigen::VectorXd& s = solver.singularValues();

    // Largest-magnitude entry of every U column made nonnegative.
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::Index argmax = 0;
        u.col(j).cwiseAbs().maxCoeff(&argmax);
        if (u(argmax, j) < 0.0) {
            u.col(j) *= -1.0;
            vt.row(j) *= -1.0;
        }
    }

    SvdResult result{Matrix(u), std::vector<double>(s.data(), s.data() + k), Matrix(vt)};
    return result;
}

SvdResult truncated_svd(const Matrix& a, std::size_t rank)
{
    if (rank == 0) {
        throw RankError("truncated_svd: rank must be >= 1");
    }
    SvdResult full = svd(a);
    const std::size_t k = std::min(rank, full.S.size());
    if (k == full.S.size()) {
        return full;
    }
    SvdResult cut;
    cut.U = Matrix(full.U.view().leftCols(static_cast<Eigen::Index>(k)).eval());
    cut.Vt = Matrix(full.Vt.view().topRows(static_cast<Eigen::Index>(k)).eval());
    cut.S.assign(full.S.begin(), full.S.begin() + static_cast<std::ptrdiff_t>(k));
    return cut;
}

QrResult qr(const Matrix& a)
{
    require_nonempty(a, "qr");
    require_finite(a.values(), "qr");

    const ColMajor dense = a.view();
    Eigen::HouseholderQR<ColMajor> solver(dense);
    const Eigen::Index m = dense.rows();
    const Eigen::Index k = std::min(m, dense.cols());

    RowMajorMatrix q = solver.householderQ() * ColMajor::Identity(m, k);
    RowMajorMatrix r = solver.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < k; ++i) {
        if (r(i, i) < 0.0) {
            r.row(i) *= -1.0;
            q.col(i) *= -1.0;
        }
    }
    return {Matrix(q), Matrix(r)};
}

RqResult rq_row_orthonormal(const Matrix& a)
{
    QrResult t = qr(a.transposed());
    return {t.R.transposed(), t.Q.transposed()};
}

std::size_t numerical_rank(std::span<const double> singularValues, double relTol)
{
    if (singularValues.empty() || singularValues.front() <= 0.0) {
        return 0;
    }
    const double threshold = relTol * singularValues.front();
    return static_cast<std::size_t>(
        std::count_if(singularValues.begin(), singularValues.end(), [&](double s) { return s > threshold; }));
}

double default_rank_tolerance(std::size_t rows, std::size_t cols)
{
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

double tail_energy(std::span<const double> singularValues, std::size_t rank)
{
    double sum = 0.0;
    for (std::size_t k = rank; k < singularValues.size(); ++k) {
        sum += singularValues[k] * singularValues[k];
    }
    return sum;
}

Matrix multiply(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) {
        throw ShapeError("matrix product dimension mismatch");
    }
    Matrix c(a.rows(), b.cols());
    c.view().noalias() = a.view() * b.view();
    return c;
}

}  // namespace ttsketch
