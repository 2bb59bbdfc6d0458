#pragma once

#include "ttsketch/random.hpp"
#include "ttsketch/tensor.hpp"
#include "ttsketch/tt.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <vector>

namespace ttsketch {

/// Sketch width s = r + p for target rank r and oversampling p.
struct OversamplingSpec {
    std::size_t rank = 1;
    std::size_t oversampling = 0;

    [[nodiscard]] std::size_t sketch_size() const { return rank + oversampling; }
};

struct DecompositionReport {
    RankTuple ranks;
    /// Σ_{k>r_i} σ_k² discarded at each truncation step (deterministic sweeps only).
    std::vector<double> discardedEnergy;
    std::chrono::nanoseconds wallTime{0};
    /// Input was identically zero; the result is an all-zero train.
    bool zeroInput = false;
};

struct Decomposition {
    TTTensor tt;
    DecompositionReport report;
};

/// TT-SVD with adaptive ranks: r_i is the numerical rank of the i-th step's
/// unfolding at `relTol` (default max(m,n)·ε per step). Result is left-orthogonal.
[[nodiscard]] Decomposition tt_svd_exact(const DenseTensor& x, std::optional<double> relTol = std::nullopt);

/// TT-SVD with truncated SVDs at fixed ranks. ‖x − result‖² equals the sum of
/// the discarded energies. Result is left-orthogonal.
[[nodiscard]] Decomposition tt_svd_truncated(const DenseTensor& x, const RankTuple& target);

/// Matrix given only through its action on a block of columns.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;
    [[nodiscard]] virtual std::size_t rows() const = 0;
    [[nodiscard]] virtual std::size_t cols() const = 0;
    /// A·block for a cols() × k block.
    [[nodiscard]] virtual Matrix apply(const Matrix& block) const = 0;
};

class DenseOperator final : public LinearOperator {
public:
    explicit DenseOperator(const Matrix& a) : a_(a) {}
    [[nodiscard]] std::size_t rows() const override { return a_.rows(); }
    [[nodiscard]] std::size_t cols() const override { return a_.cols(); }
    [[nodiscard]] Matrix apply(const Matrix& block) const override;

private:
    const Matrix& a_;
};

/// Coordinate-format sparse matrix.
class SparseOperator final : public LinearOperator {
public:
    struct Triplet {
        std::size_t row;
        std::size_t col;
        double value;
    };
    SparseOperator(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
    [[nodiscard]] std::size_t rows() const override { return rows_; }
    [[nodiscard]] std::size_t cols() const override { return cols_; }
    [[nodiscard]] Matrix apply(const Matrix& block) const override;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Triplet> triplets_;
};

/// Orthonormal basis Q of range(A·G) for a cols × s standard Gaussian G with
/// G[i, k] = GaussianField(rng).value(k, prefix_hash({i})).
[[nodiscard]] Matrix randomized_range(const LinearOperator& a, const OversamplingSpec& spec, const RngStream& rng);
[[nodiscard]] Matrix randomized_range(const Matrix& a, const OversamplingSpec& spec, const RngStream& rng);

/// The Gaussian test matrix used by randomized_range.
[[nodiscard]] Matrix range_test_matrix(std::size_t cols, std::size_t sketch, const RngStream& rng);

/// Randomized TT-SVD at sketch ranks `sketch` (clipped to the shape).
///
/// For j = d..2 a Gaussian g ∈ R^{s_{j-1} × n_1 × … × n_{j-1}} is contracted
/// with b_{j+1} (b_{d+1} = x), the {1}-unfolding of the result is factored as
/// R_j·Q_j with row-orthonormal Q_j, W_j = Q_j, and b_j = b_{j+1} contracted
/// with W_j. Finally W_1 = b_2. Cores 2..d are right-orthogonal.
///
/// The sketch of step j is drawn from GaussianField(rng.substream(j)) with the
/// multi-index (i_1..i_{j-1}) hashed by prefix_hash, so sparse and dense
/// inputs consume identical random numbers.
[[nodiscard]] Decomposition randomized_tt_svd(const DenseTensor& x, const RankTuple& sketch, const RngStream& rng);
[[nodiscard]] Decomposition randomized_tt_svd(const SparseTensor& x, const RankTuple& sketch, const RngStream& rng);

/// η(r, p) = 1 + t·√(12r/p) + u·t·e·√(r+p)/(p+1); requires p ≥ 4 and t, u ≥ 1.
[[nodiscard]] double compute_eta(std::size_t rank, std::size_t oversampling, double t, double u);

/// Frobenius-form range finder bound
/// (1 + t√(12r/p))·√(Σ_{k>r} σ_k²) + u·t·e·√(r+p)/(p+1)·σ_{r+1}; p ≥ 4.
[[nodiscard]] double range_error_bound(std::span<const double> singularValues, std::size_t rank,
                                       std::size_t oversampling, double t, double u);

/// Operator-norm form [1 + 11·√((r+p)·min(m,n))]·σ_{r+1}, holding with
/// probability ≥ 1 − 6p^{-p} for p ≥ 2. Informational only.
[[nodiscard]] double range_error_bound_spectral(std::span<const double> singularValues, std::size_t rank,
                                                std::size_t oversampling, std::size_t rows, std::size_t cols);

/// ‖x − tt_evaluate(t)‖ / ‖x‖; throws UndefinedError when ‖x‖ = 0.
[[nodiscard]] double relative_error(const DenseTensor& x, const TTTensor& t);

}  // namespace ttsketch
