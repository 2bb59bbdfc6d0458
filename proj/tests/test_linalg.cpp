#include "oracles.hpp"
#include "ttsketch/error.hpp"
#include "ttsketch/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace {

using namespace ttsketch;

Matrix diag(std::vector<double> d)
{
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

Matrix reconstruct(const SvdResult& f)
{
    Matrix us = f.U;
    for (std::size_t i = 0; i < us.rows(); ++i) {
        for (std::size_t k = 0; k < f.S.size(); ++k) {
            us(i, k) *= f.S[k];
        }
    }
    return oracle::matmul(us, f.Vt);
}

TEST(Svd, Identity)
{
    const SvdResult f = svd(Matrix::identity(3));
    EXPECT_EQ(f.S.size(), 3u);
    for (double s : f.S) {
        EXPECT_NEAR(s, 1.0, 1e-15);
    }
}

TEST(Svd, DiagonalGivesSignedPermutations)
{
    const SvdResult f = svd(diag({3, 2, 1}));
    EXPECT_NEAR(f.S[0], 3.0, 1e-15);
    EXPECT_NEAR(f.S[1], 2.0, 1e-15);
    EXPECT_NEAR(f.S[2], 1.0, 1e-15);
    for (const Matrix* m : {&f.U, &f.Vt}) {
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                EXPECT_NEAR(std::abs((*m)(i, j)), i == j ? 1.0 : 0.0, 1e-15);
            }
        }
    }
}

TEST(Svd, SignConvention)
{
    const SvdResult f = svd(oracle::gaussian_matrix(7, 5, 1));
    for (std::size_t k = 0; k < f.U.cols(); ++k) {
        double best = 0.0;
        for (std::size_t i = 0; i < f.U.rows(); ++i) {
            if (std::abs(f.U(i, k)) > std::abs(best)) {
                best = f.U(i, k);
            }
        }
        EXPECT_GE(best, 0.0);
    }
}

TEST(Svd, RejectsNonFinite)
{
    Matrix a = oracle::gaussian_matrix(3, 3, 2);
    a(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(static_cast<void>(svd(a)), NumericInputError);
    EXPECT_THROW(static_cast<void>(truncated_svd(a, 1)), NumericInputError);
    EXPECT_THROW(static_cast<void>(qr(a)), NumericInputError);
    a(1, 1) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(static_cast<void>(rq_row_orthonormal(a)), NumericInputError);
}

TEST(TruncatedSvd, Trivial)
{
    const Matrix u = oracle::gaussian_matrix(4, 1, 3);
    const Matrix v = oracle::gaussian_matrix(1, 5, 4);
    const Matrix rank1 = oracle::matmul(u, v);
    EXPECT_LE(oracle::relative_diff(reconstruct(truncated_svd(rank1, 1)).values(), rank1.values()), 1e-14);

    const Matrix d = diag({3, 2, 1});
    const Matrix rec = reconstruct(truncated_svd(d, 2));
    EXPECT_NEAR(oracle::relative_diff(rec.values(), d.values()) * d.frobenius_norm(), 1.0, 1e-14);
}

TEST(TruncatedSvd, RankLargerThanMatrixKeepsEverything)
{
    const SvdResult f = truncated_svd(oracle::gaussian_matrix(3, 5, 5), 10);
    EXPECT_EQ(f.S.size(), 3u);
}

TEST(Qr, OrthonormalInput)
{
    const Matrix q0 = qr(oracle::gaussian_matrix(6, 3, 6)).Q;
    const QrResult f = qr(q0);
    for (std::size_t j = 0; j < 3; ++j) {
        const double sign = f.R(j, j) >= 0 ? 1.0 : -1.0;
        EXPECT_NEAR(std::abs(f.R(j, j)), 1.0, 1e-14);
        for (std::size_t i = 0; i < 6; ++i) {
            EXPECT_NEAR(f.Q(i, j) * sign, q0(i, j), 1e-14);
        }
    }
}

TEST(Qr, SingleColumn)
{
    const Matrix v = oracle::gaussian_matrix(5, 1, 7);
    const QrResult f = qr(v);
    const double n = v.frobenius_norm();
    EXPECT_NEAR(f.R(0, 0), n, 1e-14 * n);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_NEAR(f.Q(i, 0), v(i, 0) / n, 1e-15);
    }
}

TEST(Qr, DiagonalOfRNonnegative)
{
    const QrResult f = qr(oracle::gaussian_matrix(9, 4, 8));
    for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_GE(f.R(j, j), 0.0);
    }
}

TEST(Rq, UnitRowVector)
{
    const Matrix a(1, 4, {0, 0, 0, 1});
    const RqResult f = rq_row_orthonormal(a);
    EXPECT_NEAR(std::abs(f.R(0, 0)), 1.0, 1e-15);
    for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_NEAR(f.Q(0, j) * f.R(0, 0), a(0, j), 1e-15);
    }
}

TEST(Rq, OrthonormalRowsGiveOrthogonalR)
{
    const Matrix a = oracle::transpose(qr(oracle::gaussian_matrix(8, 3, 9)).Q);
    const RqResult f = rq_row_orthonormal(a);
    EXPECT_LE(oracle::column_orthonormality_defect(f.R), 1e-13);
}

TEST(NumericalRank, Trivial)
{
    const std::vector<double> a{3, 2, 1};
    const std::vector<double> b{1, 1e-16};
    const std::vector<double> z{0, 0};
    EXPECT_EQ(numerical_rank(a, 1e-12), 3u);
    EXPECT_EQ(numerical_rank(b, 1e-12), 1u);
    EXPECT_EQ(numerical_rank(z, 1e-12), 0u);
    EXPECT_EQ(numerical_rank(std::span<const double>(), 1e-12), 0u);
}

TEST(TailEnergy, SumsDiscardedSquares)
{
    const std::vector<double> s{3, 2, 1};
    EXPECT_EQ(tail_energy(s, 1), 5.0);
    EXPECT_EQ(tail_energy(s, 3), 0.0);
}

// Random matrices of assorted sizes up to 64×64.
std::vector<Matrix> sample_matrices()
{
    std::vector<Matrix> out;
    RngStream rng(1000);
    for (std::uint64_t k = 0; k < 30; ++k) {
        out.push_back(oracle::gaussian_matrix(1 + rng.next_below(64), 1 + rng.next_below(64), 1000 + k));
    }
    out.push_back(oracle::gaussian_matrix(64, 64, 2000));
    return out;
}

TEST(LinalgProperties, FactorizationsReconstruct)
{
    for (const Matrix& a : sample_matrices()) {
        const SvdResult s = svd(a);
        EXPECT_LE(oracle::relative_diff(reconstruct(s).values(), a.values()), 1e-12);
        EXPECT_LE(oracle::column_orthonormality_defect(s.U), 1e-12);
        EXPECT_LE(oracle::row_orthonormality_defect(s.Vt), 1e-12);
        EXPECT_TRUE(std::is_sorted(s.S.rbegin(), s.S.rend()));

        const QrResult q = qr(a);
        EXPECT_EQ(q.Q.cols(), std::min(a.rows(), a.cols()));
        EXPECT_LE(oracle::relative_diff(oracle::matmul(q.Q, q.R).values(), a.values()), 1e-12);
        EXPECT_LE(oracle::column_orthonormality_defect(q.Q), 1e-12);
        for (std::size_t i = 0; i < q.R.rows(); ++i) {
            for (std::size_t j = 0; j < std::min(i, q.R.cols()); ++j) {
                EXPECT_EQ(q.R(i, j), 0.0);
            }
        }

        const RqResult r = rq_row_orthonormal(a);
        EXPECT_LE(oracle::relative_diff(oracle::matmul(r.R, r.Q).values(), a.values()), 1e-12);
        EXPECT_LE(oracle::row_orthonormality_defect(r.Q), 1e-12);
        // Row space: a·QᵀQ = a.
        const Matrix proj = oracle::matmul(oracle::matmul(a, oracle::transpose(r.Q)), r.Q);
        EXPECT_LE(oracle::relative_diff(proj.values(), a.values()), 1e-12);
    }
}

TEST(LinalgProperties, EckartYoung)
{
    for (const Matrix& a : sample_matrices()) {
        const SvdResult full = svd(a);
        for (std::size_t r : {std::size_t{1}, full.S.size() / 2 + 1}) {
            const SvdResult t = truncated_svd(a, r);
            const Matrix rec = reconstruct(t);
            double resid = 0.0;
            for (std::size_t i = 0; i < rec.values().size(); ++i) {
                resid += (rec.values()[i] - a.values()[i]) * (rec.values()[i] - a.values()[i]);
            }
            const double tail = tail_energy(full.S, std::min(r, full.S.size()));
            EXPECT_NEAR(resid, tail, 1e-10 * std::max(tail, 1e-300) + 1e-24 * a.frobenius_norm());
        }
    }
}

Matrix permute_rows(const Matrix& a, const std::vector<std::size_t>& perm)
{
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(i, j) = a(perm[i], j);
        }
    }
    return out;
}

TEST(LinalgProperties, SingularValuesInvariantUnderPermutationAndRotation)
{
    for (std::uint64_t k = 0; k < 10; ++k) {
        const Matrix a = oracle::gaussian_matrix(12, 7, 3000 + k);
        const std::vector<double> s = svd(a).S;
        std::vector<std::size_t> perm(12);
        std::iota(perm.begin(), perm.end(), 0);
        RngStream rng(3100 + k);
        for (std::size_t i = 12; i > 1; --i) {
            std::swap(perm[i - 1], perm[rng.next_below(i)]);
        }
        const Matrix rowPerm = permute_rows(a, perm);
        const Matrix colPerm = oracle::transpose(permute_rows(oracle::transpose(a), {6, 5, 4, 3, 2, 1, 0}));
        const Matrix left = qr(oracle::gaussian_matrix(12, 12, 3200 + k)).Q;
        const Matrix right = qr(oracle::gaussian_matrix(7, 7, 3300 + k)).Q;
        const Matrix rotated = oracle::matmul(oracle::matmul(left, a), right);
        for (const Matrix* b : {&rowPerm, &colPerm, &rotated}) {
            const std::vector<double> t = svd(*b).S;
            EXPECT_LE(oracle::max_abs_diff(s, t), 1e-12 * s[0]);
        }
    }
}

TEST(LinalgProperties, RankOfConstructedMatrices)
{
    for (std::size_t r = 1; r <= 5; ++r) {
        const Matrix a = oracle::matmul(oracle::gaussian_matrix(9, r, 4000 + r), oracle::gaussian_matrix(r, 8, 4100 + r));
        EXPECT_EQ(numerical_rank(svd(a).S, default_rank_tolerance(9, 8)), r);
    }
}

}  // namespace
