#pragma once

#include "ttsketch/tensor.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ttsketch {

/// A = U·diag(S)·Vt with orthonormal columns of U and rows of Vt.
/// Each column of U has its largest-magnitude entry nonnegative.
struct SvdResult {
    Matrix U;
    std::vector<double> S;
    Matrix Vt;
};

/// A = Q·R, Q with orthonormal columns, R upper triangular with a nonnegative diagonal.
struct QrResult {
    Matrix Q;
    Matrix R;
};

/// A = R·Q, Q with orthonormal rows.
struct RqResult {
    Matrix R;
    Matrix Q;
};

/// Thin SVD, k = min(m, n).
[[nodiscard]] SvdResult svd(const Matrix& a);

/// Leading min(rank, m, n) singular triples.
[[nodiscard]] SvdResult truncated_svd(const Matrix& a, std::size_t rank);

/// Thin Householder QR; Q has min(m, n) columns.
[[nodiscard]] QrResult qr(const Matrix& a);

/// R·Q factorization with row-orthonormal Q, computed from the QR of aᵀ.
/// Q has min(m, n) rows and R = a·Qᵀ.
[[nodiscard]] RqResult rq_row_orthonormal(const Matrix& a);

/// Number of singular values strictly above relTol·σ_1; zero for an all-zero list.
[[nodiscard]] std::size_t numerical_rank(std::span<const double> singularValues, double relTol);

/// max(m, n)·ε, the default relative tolerance for numerical_rank.
[[nodiscard]] double default_rank_tolerance(std::size_t rows, std::size_t cols);

/// Σ_{k>=rank} σ_k² over a 0-based singular value list.
[[nodiscard]] double tail_energy(std::span<const double> singularValues, std::size_t rank);

/// a·b
[[nodiscard]] Matrix multiply(const Matrix& a, const Matrix& b);

/// Throws NumericInputError if any entry is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

}  // namespace ttsketch
