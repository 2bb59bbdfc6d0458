#include "ttsketch/decompose.hpp"

#include "sparse_sketch.hpp"
#include "ttsketch/error.hpp"
#include "ttsketch/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ttsketch {

namespace {

using Clock = std::chrono::steady_clock;

/// Shared TT-SVD sweep; `choose_rank(step, svd)` picks the rank kept at each step.
template <typename RankChooser>
Decomposition tt_svd_sweep(const DenseTensor& x, RankChooser&& choose_rank)
{
    const auto start = Clock::now();
    const std::size_t d = x.order();
    if (d < 2) {
        throw ShapeError("TT-SVD needs a tensor of order >= 2");
    }
    require_finite(x.values(), "TT-SVD");

    DecompositionReport report;
    report.zeroInput = norm(x) == 0.0;
    std::vector<DenseTensor> cores;
    std::vector<std::size_t> ranks;
    cores.reserve(d);

    // rest holds x_i flattened to r_i × (n_{i+1}⋯n_d).
    std::vector<double> rest(x.values().begin(), x.values().end());
    std::size_t left = 1;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const std::size_t n = x.shape()[i];
        const std::size_t rows = left * n;
        const std::size_t cols = rest.size() / rows;
        const Matrix unfolding(rows, cols, std::move(rest));
        const SvdResult f = svd(unfolding);
        const std::size_t r = std::clamp<std::size_t>(choose_rank(i, f, rows, cols), 1, f.S.size());

        report.discardedEnergy.push_back(tail_energy(f.S, r));
        RowMajorMatrix u = f.U.view().leftCols(static_cast<Eigen::Index>(r));
        RowMajorMatrix svt = f.Vt.view().topRows(static_cast<Eigen::Index>(r));
        for (std::size_t k = 0; k < r; ++k) {
            svt.row(static_cast<Eigen::Index>(k)) *= f.S[k];
        }
        cores.push_back(TTTensor::make_core(i, d, left, n, r, std::vector<double>(u.data(), u.data() + u.size())));
        rest.assign(svt.data(), svt.data() + svt.size());
        ranks.push_back(r);
        left = r;
    }
    cores.push_back(TTTensor::make_core(d - 1, d, left, x.shape()[d - 1], 1, std::move(rest)));

    report.ranks = RankTuple(std::move(ranks));
    Decomposition out{TTTensor(std::move(cores), Orthogonality::left), std::move(report)};
    out.report.wallTime = Clock::now() - start;
    return out;
}

/// Walks all multi-indices over `dims` in canonical order, keeping the
/// prefix hash of the current one.
class PrefixWalker {
public:
    explicit PrefixWalker(std::span<const std::size_t> dims)
        : dims_(dims.begin(), dims.end()), index_(dims.size(), 0), hashes_(dims.size() + 1, 0)
    {
        for (std::size_t level = 0; level < dims_.size(); ++level) {
            hashes_[level + 1] = extend_prefix_hash(hashes_[level], 0);
        }
    }

    [[nodiscard]] std::uint64_t hash() const { return hashes_.back(); }

    void advance()
    {
        const std::size_t m = dims_.size();
        std::size_t level = m;
        while (level-- > 0) {
            if (++index_[level] < dims_[level]) {
                break;
            }
            index_[level] = 0;
        }
        if (level < m) {
            for (std::size_t l = level; l < m; ++l) {
                hashes_[l + 1] = extend_prefix_hash(hashes_[l], index_[l]);
            }
        }
    }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> index_;
    std::vector<std::uint64_t> hashes_;
};

/// Fill `g` (rows × count) with the next `count` sketch columns of `walker`.
void fill_sketch_columns(std::span<const std::uint64_t> rowKeys, PrefixWalker& walker, RowMajorMatrix& g)
{
    for (Eigen::Index p = 0; p < g.cols(); ++p) {
        const std::uint64_t h = walker.hash();
        for (std::size_t k = 0; k < rowKeys.size(); ++k) {
            g(static_cast<Eigen::Index>(k), p) = counter_gaussian(rowKeys[k], h);
        }
        walker.advance();
    }
}

std::vector<std::uint64_t> row_keys(const GaussianField& field, std::size_t rows)
{
    std::vector<std::uint64_t> keys(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        keys[k] = field.row_key(k);
    }
    return keys;
}

/// g·B for the Gaussian sketch g (rows × prefixCount) of `field`, generated in
/// column chunks so the full sketch is never held in memory.
RowMajorMatrix sketch_product(const GaussianField& field, std::size_t rows, std::span<const std::size_t> dims,
                              const ConstMatrixView& B)
{
    constexpr Eigen::Index chunk = 4096;
    const std::vector<std::uint64_t> keys = row_keys(field, rows);
    PrefixWalker walker(dims);
    RowMajorMatrix a = RowMajorMatrix::Zero(static_cast<Eigen::Index>(rows), B.cols());
    RowMajorMatrix g;
    for (Eigen::Index first = 0; first < B.rows(); first += chunk) {
        const Eigen::Index width = std::min(chunk, B.rows() - first);
        g.resize(static_cast<Eigen::Index>(rows), width);
        fill_sketch_columns(keys, walker, g);
        a.noalias() += g * B.middleRows(first, width);
    }
    return a;
}

Decomposition zero_decomposition(const Shape& shape, const RankTuple& ranks, Clock::time_point start)
{
    Decomposition out{TTTensor::zeros(shape, RankTuple::uniform(ranks.size(), 1)), {}};
    out.report.ranks = out.tt.ranks();
    out.report.zeroInput = true;
    out.report.wallTime = Clock::now() - start;
    return out;
}

}  // namespace

Decomposition tt_svd_exact(const DenseTensor& x, std::optional<double> relTol)
{
    return tt_svd_sweep(x, [&](std::size_t, const SvdResult& f, std::size_t rows, std::size_t cols) {
        return numerical_rank(f.S, relTol.value_or(default_rank_tolerance(rows, cols)));
    });
}

Decomposition tt_svd_truncated(const DenseTensor& x, const RankTuple& target)
{
    validate_ranks(x.shape(), target);
    return tt_svd_sweep(x, [&](std::size_t step, const SvdResult&, std::size_t, std::size_t) { return target[step]; });
}

// ---------------------------------------------------------------------------
// Range finder

Matrix DenseOperator::apply(const Matrix& block) const
{
    return multiply(a_, block);
}

SparseOperator::SparseOperator(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols), triplets_(std::move(triplets))
{
    for (const Triplet& t : triplets_) {
        if (t.row >= rows_ || t.col >= cols_) {
            throw ShapeError("sparse operator entry out of range");
        }
    }
}

Matrix SparseOperator::apply(const Matrix& block) const
{
    if (block.rows() != cols_) {
        throw ShapeError("sparse operator applied to a block of the wrong height");
    }
    Matrix out(rows_, block.cols());
    for (const Triplet& t : triplets_) {
        for (std::size_t k = 0; k < block.cols(); ++k) {
            out(t.row, k) += t.value * block(t.col, k);
        }
    }
    return out;
}

Matrix range_test_matrix(std::size_t cols, std::size_t sketch, const RngStream& rng)
{
    const std::size_t dims[] = {cols};
    PrefixWalker walker(dims);
    RowMajorMatrix g(static_cast<Eigen::Index>(sketch), static_cast<Eigen::Index>(cols));
    fill_sketch_columns(row_keys(GaussianField(rng), sketch), walker, g);
    Matrix out(cols, sketch);
    out.view() = g.transpose();
    return out;
}

Matrix randomized_range(const LinearOperator& a, const OversamplingSpec& spec, const RngStream& rng)
{
    const std::size_t s = spec.sketch_size();
    if (spec.rank == 0) {
        throw RankError("randomized_range: rank must be >= 1");
    }
    if (s > a.cols()) {
        throw RankError("randomized_range: sketch size exceeds the matrix width");
    }
    const Matrix sketch = a.apply(range_test_matrix(a.cols(), s, rng));
    return qr(sketch).Q;
}

Matrix randomized_range(const Matrix& a, const OversamplingSpec& spec, const RngStream& rng)
{
    return randomized_range(DenseOperator(a), spec, rng);
}

// ---------------------------------------------------------------------------
// Randomized TT-SVD

Decomposition randomized_tt_svd(const DenseTensor& x, const RankTuple& sketch, const RngStream& rng)
{
    const auto start = Clock::now();
    const std::size_t d = x.order();
    if (d < 2) {
        throw ShapeError("randomized TT-SVD needs a tensor of order >= 2");
    }
    require_finite(x.values(), "randomized TT-SVD");
    const RankTuple s = clip_ranks(x.shape(), sketch);
    if (norm(x) == 0.0) {
        return zero_decomposition(x.shape(), s, start);
    }

    const std::vector<std::size_t>& dims = x.shape().dims();
    std::vector<DenseTensor> cores(d);

    // b holds b_{j+1} flattened to (n_1⋯n_j) × s_j, with s_d = 1.
    std::vector<double> b(x.values().begin(), x.values().end());
    for (std::size_t c = d - 1; c >= 1; --c) {
        const std::size_t n = dims[c];
        const std::size_t sl = s[c - 1];
        const std::size_t sr = c + 1 == d ? 1 : s[c];
        const std::size_t prefixCount = b.size() / (n * sr);

        const ConstMatrixView B(b.data(), static_cast<Eigen::Index>(prefixCount), static_cast<Eigen::Index>(n * sr));
        const RowMajorMatrix a =
            sketch_product(GaussianField(rng.substream(c + 1)), sl, std::span<const std::size_t>(dims.data(), c), B);

        RqResult f = rq_row_orthonormal(Matrix(a));
        const RowMajorMatrix next = B * f.Q.view().transpose();
        cores[c] = TTTensor::make_core(c, d, f.Q.rows(), n, sr, std::move(f.Q).release());
        b.assign(next.data(), next.data() + next.size());
    }
    cores[0] = TTTensor::make_core(0, d, 1, dims[0], s[0], std::move(b));

    Decomposition out{TTTensor(std::move(cores), Orthogonality::right), {}};
    out.report.ranks = out.tt.ranks();
    out.report.wallTime = Clock::now() - start;
    return out;
}

Decomposition randomized_tt_svd(const SparseTensor& x, const RankTuple& sketch, const RngStream& rng)
{
    const auto start = Clock::now();
    if (x.order() < 2) {
        throw ShapeError("randomized TT-SVD needs a tensor of order >= 2");
    }
    require_finite(x.values(), "randomized TT-SVD");
    const RankTuple s = clip_ranks(x.shape(), sketch);
    if (x.nnz() == 0) {
        return zero_decomposition(x.shape(), s, start);
    }
    Decomposition out{detail::sparse_randomized_tt_svd(x, s, rng), {}};
    out.report.ranks = out.tt.ranks();
    out.report.wallTime = Clock::now() - start;
    return out;
}

// ---------------------------------------------------------------------------
// Bounds and errors

double compute_eta(std::size_t rank, std::size_t oversampling, double t, double u)
{
    if (rank == 0) {
        throw DomainError("eta: rank must be >= 1");
    }
    if (oversampling < 4) {
        throw DomainError("eta: oversampling must be >= 4");
    }
    if (!(t >= 1.0) || !(u >= 1.0)) {
        throw DomainError("eta: t and u must be >= 1");
    }
    const double r = static_cast<double>(rank);
    const double p = static_cast<double>(oversampling);
    return 1.0 + t * std::sqrt(12.0 * r / p) + u * t * std::numbers::e * std::sqrt(r + p) / (p + 1.0);
}

double range_error_bound(std::span<const double> singularValues, std::size_t rank, std::size_t oversampling,
                         double t, double u)
{
    if (oversampling < 4) {
        throw DomainError("range bound: oversampling must be >= 4");
    }
    if (!(t >= 1.0) || !(u >= 1.0)) {
        throw DomainError("range bound: t and u must be >= 1");
    }
    const double r = static_cast<double>(rank);
    const double p = static_cast<double>(oversampling);
    const double tail = std::sqrt(tail_energy(singularValues, rank));
    const double next = rank < singularValues.size() ? singularValues[rank] : 0.0;
    return (1.0 + t * std::sqrt(12.0 * r / p)) * tail + u * t * std::numbers::e * std::sqrt(r + p) / (p + 1.0) * next;
}

double range_error_bound_spectral(std::span<const double> singularValues, std::size_t rank, std::size_t oversampling,
                                  std::size_t rows, std::size_t cols)
{
    if (oversampling < 2) {
        throw DomainError("range bound: oversampling must be >= 2");
    }
    const double next = rank < singularValues.size() ? singularValues[rank] : 0.0;
    const double width = static_cast<double>((rank + oversampling) * std::min(rows, cols));
    return (1.0 + 11.0 * std::sqrt(width)) * next;
}

double relative_error(const DenseTensor& x, const TTTensor& t)
{
    if (x.shape() != t.shape()) {
        throw ShapeError("relative_error: shapes differ");
    }
    const double reference = norm(x);
    if (reference == 0.0) {
        throw UndefinedError("relative error of a zero tensor is undefined");
    }
    return norm(subtract(x, tt_evaluate(t))) / reference;
}

}  // namespace ttsketch
