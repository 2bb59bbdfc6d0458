#include "oracles.hpp"
#include "ttsketch/decompose.hpp"
#include "ttsketch/error.hpp"
#include "ttsketch/generators.hpp"
#include "ttsketch/tt.hpp"

#include <gtest/gtest.h>

namespace {

using namespace ttsketch;

TTTensor rank_one(const std::vector<std::vector<double>>& vectors)
{
    const std::size_t d = vectors.size();
    std::vector<DenseTensor> cores;
    for (std::size_t i = 0; i < d; ++i) {
        cores.push_back(TTTensor::make_core(i, d, 1, vectors[i].size(), 1, vectors[i]));
    }
    return TTTensor(std::move(cores));
}

TEST(TTTensor, CoreShapesFollowBoundaryConvention)
{
    const TTTensor t = random_tt(Shape{2, 3, 4}, RankTuple{2, 3}, RngStream(1));
    EXPECT_EQ(t.core(0).shape(), (Shape{2, 2}));
    EXPECT_EQ(t.core(1).shape(), (Shape{2, 3, 3}));
    EXPECT_EQ(t.core(2).shape(), (Shape{3, 4}));
    EXPECT_EQ(t.left_unfolding(1).rows(), 6u);
    EXPECT_EQ(t.right_unfolding(1).cols(), 9u);
    EXPECT_EQ(t.parameter_count(), 4u + 18u + 12u);
}

TEST(TTTensor, RejectsInconsistentCores)
{
    std::vector<DenseTensor> cores = {TTTensor::make_core(0, 2, 1, 2, 2, std::vector<double>(4, 1.0)),
                                      TTTensor::make_core(1, 2, 3, 2, 1, std::vector<double>(6, 1.0))};
    EXPECT_THROW(TTTensor(std::move(cores)), Error);
    EXPECT_THROW(TTTensor(std::vector<DenseTensor>{DenseTensor(Shape{1, 2, 1})}), Error);
}

TEST(TtEvaluate, RankOneOuterProduct)
{
    const std::vector<double> a{1, 2}, b{3, -1, 2}, c{0.5, 4};
    const DenseTensor x = tt_evaluate(rank_one({a, b, c}));
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t k = 0; k < 2; ++k) {
                EXPECT_EQ(x.at({i, j, k}), a[i] * b[j] * c[k]);
            }
        }
    }
}

TEST(TtEvaluate, IdentityChainGivesKroneckerDelta)
{
    const std::size_t n = 3;
    std::vector<double> first(n * n, 0.0), mid(n * n * n, 0.0), last(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        first[i * n + i] = 1.0;
        last[i * n + i] = 1.0;
        mid[(i * n + i) * n + i] = 1.0;
    }
    const TTTensor t({TTTensor::make_core(0, 3, 1, n, n, first), TTTensor::make_core(1, 3, n, n, n, mid),
                      TTTensor::make_core(2, 3, n, n, 1, last)});
    const DenseTensor x = tt_evaluate(t);
    oracle::for_each_index({n, n, n}, [&](const std::vector<std::size_t>& i) {
        EXPECT_EQ(x.at({i[0], i[1], i[2]}), (i[0] == i[1] && i[1] == i[2]) ? 1.0 : 0.0);
    });
}

TEST(ClipRanks, Examples)
{
    EXPECT_EQ(clip_ranks(Shape(std::vector<std::size_t>(8, 4)), 20), (RankTuple{4, 16, 20, 20, 20, 16, 4}));
    EXPECT_EQ(clip_ranks(Shape{5, 5, 5}, 1), (RankTuple{1, 1}));
    EXPECT_EQ(clip_ranks(Shape{2, 3, 4}, RankTuple{9, 9}), (RankTuple{2, 4}));
    EXPECT_EQ(max_ranks(Shape{2, 3, 4}), (RankTuple{2, 4}));
}

TEST(ValidateRanks, Errors)
{
    EXPECT_THROW(validate_ranks(Shape{2, 2, 2}, RankTuple{2}), RankError);
    EXPECT_THROW(validate_ranks(Shape{2, 2, 2}, RankTuple{3, 2}), RankError);
    EXPECT_THROW(RankTuple({0, 1}), RankError);
    EXPECT_NO_THROW(validate_ranks(Shape{2, 2, 2}, RankTuple{2, 2}));
}

TEST(TtNorm, Trivial)
{
    EXPECT_NEAR(tt_norm(rank_one({{0.6, 0.8}, {0, 1, 0}, {1, 0}})), 1.0, 1e-15);
    const TTTensor t = random_tt(Shape{3, 3, 3}, RankTuple{2, 2}, RngStream(2));
    EXPECT_NEAR(tt_norm(tt_scaled(t, 3.0)), 3.0 * tt_norm(t), 1e-12 * tt_norm(t));
}

TEST(Orthogonalize, AlreadyOrthogonalIsStable)
{
    const TTTensor t = orthogonalize_left(random_tt(Shape{3, 4, 3}, RankTuple{2, 3}, RngStream(3)));
    const TTTensor again = orthogonalize_left(t);
    EXPECT_LE(oracle::relative_diff(tt_evaluate(again).values(), tt_evaluate(t).values()), 1e-13);
    EXPECT_EQ(again.orthogonality(), Orthogonality::left);
    const TTTensor r = orthogonalize_right(random_tt(Shape{3, 4, 3}, RankTuple{2, 3}, RngStream(4)));
    EXPECT_LE(oracle::relative_diff(tt_evaluate(orthogonalize_right(r)).values(), tt_evaluate(r).values()), 1e-13);
}

TEST(Orthogonalize, RankOneMovesMagnitudeToTheOpenEnd)
{
    const TTTensor t = rank_one({{3, 4}, {1, 1, 1}, {2, 0}});
    const TTTensor l = orthogonalize_left(t);
    EXPECT_NEAR(norm(l.core(0)), 1.0, 1e-15);
    EXPECT_NEAR(norm(l.core(1)), 1.0, 1e-15);
    EXPECT_NEAR(norm(l.core(2)), tt_norm(t), 1e-13);
    const TTTensor r = orthogonalize_right(t);
    EXPECT_NEAR(norm(r.core(2)), 1.0, 1e-15);
    EXPECT_NEAR(norm(r.core(1)), 1.0, 1e-15);
    EXPECT_NEAR(norm(r.core(0)), tt_norm(t), 1e-13);
}

TEST(TtRound, TargetEqualsCurrentIsLossless)
{
    const TTTensor t = random_tt(Shape{3, 4, 4, 3}, RankTuple{3, 4, 3}, RngStream(5));
    const TTTensor r = tt_round(t, t.ranks());
    EXPECT_LE(oracle::relative_diff(tt_evaluate(r).values(), tt_evaluate(t).values()), 1e-12);
}

TEST(TtRound, PaddedRankOneIsRecovered)
{
    // rank-1 tensor stored at rank 3: extra slices are zero
    const Shape shape{3, 3, 3};
    const TTTensor base = random_tt(shape, RankTuple{1, 1}, RngStream(6));
    std::vector<double> w0(9, 0.0), w1(27, 0.0), w2(9, 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        w0[i * 3] = base.core(0)[i];
        w1[i * 3] = base.core(1)[i];
        w2[i] = base.core(2)[i];
    }
    const TTTensor padded({TTTensor::make_core(0, 3, 1, 3, 3, w0), TTTensor::make_core(1, 3, 3, 3, 3, w1),
                           TTTensor::make_core(2, 3, 3, 3, 1, w2)});
    const TTTensor r = tt_round(padded, RankTuple{1, 1});
    EXPECT_EQ(r.ranks(), (RankTuple{1, 1}));
    EXPECT_LE(oracle::relative_diff(tt_evaluate(r).values(), tt_evaluate(base).values()), 1e-12);
}

TEST(TtRound, RejectsLargerTarget)
{
    const TTTensor t = random_tt(Shape{3, 3, 3}, RankTuple{2, 2}, RngStream(7));
    EXPECT_THROW(static_cast<void>(tt_round(t, RankTuple{3, 2})), RankError);
    EXPECT_THROW(static_cast<void>(tt_round(t, RankTuple{2})), RankError);
}

struct TrainCase {
    Shape shape;
    RankTuple ranks;
};

std::vector<TrainCase> train_cases()
{
    std::vector<TrainCase> out;
    RngStream rng(50);
    for (int k = 0; k < 30; ++k) {
        std::vector<std::size_t> dims(2 + rng.next_below(4));
        for (auto& n : dims) {
            n = 2 + rng.next_below(3);
        }
        const Shape shape(dims);
        out.push_back({shape, clip_ranks(shape, 1 + rng.next_below(4))});
    }
    return out;
}

TEST(TTProperties, EvaluationMatchesEntrywiseSum)
{
    std::uint64_t seed = 60;
    for (const TrainCase& c : train_cases()) {
        const TTTensor t = random_tt(c.shape, c.ranks, RngStream(seed++));
        EXPECT_LE(oracle::relative_diff(tt_evaluate(t).values(), oracle::tt_entrywise(t).values()), 1e-13);
    }
}

TEST(TTProperties, SingleCoreScalingIsLinear)
{
    std::uint64_t seed = 100;
    for (const TrainCase& c : train_cases()) {
        const TTTensor t = random_tt(c.shape, c.ranks, RngStream(seed++));
        const std::size_t i = seed % t.order();
        DenseTensor scaled = t.core(i);
        scaled *= -2.5;
        const DenseTensor a = tt_evaluate(t.with_core(i, scaled));
        DenseTensor b = tt_evaluate(t);
        b *= -2.5;
        EXPECT_LE(oracle::relative_diff(a.values(), b.values()), 1e-14);
    }
}

TEST(TTProperties, OrthogonalizationPreservesTensorAndOrthogonality)
{
    std::uint64_t seed = 150;
    for (const TrainCase& c : train_cases()) {
        const TTTensor t = random_tt(c.shape, c.ranks, RngStream(seed++));
        const DenseTensor x = tt_evaluate(t);
        const TTTensor l = orthogonalize_left(t);
        const TTTensor r = orthogonalize_right(t);
        EXPECT_EQ(l.orthogonality(), Orthogonality::left);
        EXPECT_EQ(r.orthogonality(), Orthogonality::right);
        EXPECT_LE(oracle::relative_diff(tt_evaluate(l).values(), x.values()), 1e-12);
        EXPECT_LE(oracle::relative_diff(tt_evaluate(r).values(), x.values()), 1e-12);
        for (std::size_t i = 0; i + 1 < t.order(); ++i) {
            EXPECT_LE(oracle::column_orthonormality_defect(l.left_unfolding(i)), 1e-12);
        }
        for (std::size_t i = 1; i < t.order(); ++i) {
            EXPECT_LE(oracle::row_orthonormality_defect(r.right_unfolding(i)), 1e-12);
        }
        EXPECT_NEAR(tt_norm(t), norm(x), 1e-12 * norm(x));
    }
}

TEST(TTProperties, RoundingIsQuasiOptimal)
{
    std::uint64_t seed = 200;
    for (const TrainCase& c : train_cases()) {
        const TTTensor t = random_tt(c.shape, c.ranks, RngStream(seed++));
        std::vector<std::size_t> lower(c.ranks.size());
        for (std::size_t i = 0; i < lower.size(); ++i) {
            lower[i] = std::max<std::size_t>(1, c.ranks[i] - 1);
        }
        const RankTuple target(lower);
        const DenseTensor x = tt_evaluate(t);
        const TTTensor r = tt_round(t, target);
        EXPECT_EQ(r.ranks(), target);
        const double err = norm(subtract(x, tt_evaluate(r)));
        // best rank-target error is at least the largest single-unfolding tail;
        // compared in squares since the Gram oracle resolves tails only to ~ε·‖x‖²
        double best2 = 0.0;
        for (std::size_t i = 0; i < target.size(); ++i) {
            std::vector<std::size_t> rows(i + 1);
            std::iota(rows.begin(), rows.end(), 0);
            best2 = std::max(best2, oracle::tail_energy(oracle::matricize(x, rows), target[i]));
        }
        const double d = static_cast<double>(t.order());
        EXPECT_GE(err * err, best2 - 1e-12 * inner(x, x));
        // and the sweep is within √(d−1) of the sum of per-step tails
        double tails = 0.0;
        for (double e : tt_svd_truncated(x, target).report.discardedEnergy) {
            tails += e;
        }
        EXPECT_LE(err, std::sqrt(tails) * (1 + 1e-10) + 1e-12 * norm(x));
        EXPECT_LE(err, std::sqrt(d - 1.0) * std::sqrt(tails) + 1e-12 * norm(x));
    }
}

TEST(TTProperties, RoundingExactLowRankIsLossless)
{
    std::uint64_t seed = 250;
    for (const TrainCase& c : train_cases()) {
        const TTTensor t = random_tt(c.shape, c.ranks, RngStream(seed++));
        const TTTensor wide = random_tt(c.shape, c.ranks, RngStream(seed++));
        // t stored at higher rank: the extra block never reaches the last core
        std::vector<DenseTensor> cores;
        const std::size_t d = t.order();
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t l1 = t.left_rank(i), r1 = t.right_rank(i);
            const std::size_t l2 = i == 0 ? 0 : wide.left_rank(i), r2 = i + 1 == d ? 0 : wide.right_rank(i);
            const std::size_t n = c.shape[i];
            std::vector<double> v((l1 + l2) * n * (r1 + r2), 0.0);
            for (std::size_t a = 0; a < l1; ++a) {
                for (std::size_t m = 0; m < n; ++m) {
                    for (std::size_t b = 0; b < r1; ++b) {
                        v[(a * n + m) * (r1 + r2) + b] = t.core(i)[(a * n + m) * r1 + b];
                    }
                }
            }
            for (std::size_t a = 0; a < l2; ++a) {
                for (std::size_t m = 0; m < n; ++m) {
                    for (std::size_t b = 0; b < r2; ++b) {
                        v[((l1 + a) * n + m) * (r1 + r2) + r1 + b] = wide.core(i)[(a * n + m) * r2 + b];
                    }
                }
            }
            cores.push_back(TTTensor::make_core(i, d, l1 + l2, n, r1 + r2, std::move(v)));
        }
        const TTTensor padded(std::move(cores));
        const RankTuple target = c.ranks;
        const TTTensor r = tt_round(padded, target);
        EXPECT_LE(oracle::relative_diff(tt_evaluate(r).values(), tt_evaluate(t).values()), 1e-12);
    }
}

}  // namespace
