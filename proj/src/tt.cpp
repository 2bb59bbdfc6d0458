#include "ttsketch/tt.hpp"

#include "ttsketch/error.hpp"
#include "ttsketch/linalg.hpp"

#include <algorithm>
#include <string>

namespace ttsketch {

RankTuple::RankTuple(std::vector<std::size_t> ranks) : ranks_(std::move(ranks))
{
    for (std::size_t r : ranks_) {
        if (r == 0) {
            throw RankError("TT ranks must be >= 1");
        }
    }
}

RankTuple RankTuple::uniform(std::size_t count, std::size_t rank)
{
    return RankTuple(std::vector<std::size_t>(count, rank));
}

std::size_t RankTuple::max() const
{
    return ranks_.empty() ? 0 : *std::max_element(ranks_.begin(), ranks_.end());
}

RankTuple max_ranks(const Shape& shape)
{
    const std::size_t d = shape.order();
    std::vector<std::size_t> ranks;
    ranks.reserve(d > 0 ? d - 1 : 0);
    // Saturating products so that huge sparse shapes still clip sensibly.
    constexpr std::size_t cap = std::size_t{1} << 62;
    for (std::size_t i = 1; i < d; ++i) {
        std::size_t left = 1;
        std::size_t right = 1;
        for (std::size_t j = 0; j < i; ++j) {
            left = std::min(cap, left * std::min(cap, shape[j]));
        }
        for (std::size_t j = i; j < d; ++j) {
            right = std::min(cap, right * std::min(cap, shape[j]));
        }
        ranks.push_back(std::min(left, right));
    }
    return RankTuple(std::move(ranks));
}

RankTuple clip_ranks(const Shape& shape, std::size_t rank)
{
    if (rank == 0) {
        throw RankError("rank must be >= 1");
    }
    return clip_ranks(shape, RankTuple::uniform(shape.order() - 1, rank));
}

RankTuple clip_ranks(const Shape& shape, const RankTuple& ranks)
{
    const RankTuple limit = max_ranks(shape);
    if (ranks.size() != limit.size()) {
        throw RankError("rank tuple length must be order - 1");
    }
    std::vector<std::size_t> clipped(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        clipped[i] = std::min(ranks[i], limit[i]);
    }
    return RankTuple(std::move(clipped));
}

void validate_ranks(const Shape& shape, const RankTuple& ranks)
{
    const RankTuple limit = max_ranks(shape);
    if (ranks.size() != limit.size()) {
        throw RankError("rank tuple length must be order - 1");
    }
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (ranks[i] > limit[i]) {
            throw RankError("rank r_" + std::to_string(i + 1) + " = " + std::to_string(ranks[i]) +
                            " exceeds the matricization bound " + std::to_string(limit[i]));
        }
    }
}

// ---------------------------------------------------------------------------
// TTTensor

DenseTensor TTTensor::make_core(std::size_t i, std::size_t order, std::size_t leftRank, std::size_t extent,
                                std::size_t rightRank, std::vector<double> values)
{
    if (i == 0) {
        return DenseTensor(Shape{extent, rightRank}, std::move(values));
    }
    if (i + 1 == order) {
        return DenseTensor(Shape{leftRank, extent}, std::move(values));
    }
    return DenseTensor(Shape{leftRank, extent, rightRank}, std::move(values));
}

TTTensor::TTTensor(std::vector<DenseTensor> cores, Orthogonality orthogonality)
    : cores_(std::move(cores)), orthogonality_(orthogonality)
{
    const std::size_t d = cores_.size();
    if (d < 2) {
        throw ShapeError("tensor train needs at least two cores");
    }
    std::vector<std::size_t> dims(d);
    std::vector<std::size_t> ranks(d - 1);
    std::size_t previous = 1;
    for (std::size_t i = 0; i < d; ++i) {
        const Shape& s = cores_[i].shape();
        const bool first = i == 0;
        const bool last = i + 1 == d;
        const std::size_t expectedOrder = (first || last) ? 2 : 3;
        if (s.order() != expectedOrder) {
            throw ShapeError("core " + std::to_string(i) + " has order " + std::to_string(s.order()) +
                             ", expected " + std::to_string(expectedOrder));
        }
        const std::size_t left = first ? 1 : s[0];
        const std::size_t extent = first ? s[0] : s[1];
        if (left != previous) {
            throw ShapeError("rank mismatch between cores " + std::to_string(i - 1) + " and " + std::to_string(i));
        }
        dims[i] = extent;
        if (!last) {
            ranks[i] = s[s.order() - 1];
            previous = ranks[i];
        }
    }
    shape_ = Shape(std::move(dims));
    ranks_ = RankTuple(std::move(ranks));
}

TTTensor TTTensor::zeros(const Shape& shape, const RankTuple& ranks)
{
    const std::size_t d = shape.order();
    if (ranks.size() + 1 != d) {
        throw RankError("rank tuple length must be order - 1");
    }
    std::vector<DenseTensor> cores;
    cores.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t left = i == 0 ? 1 : ranks[i - 1];
        const std::size_t right = i + 1 == d ? 1 : ranks[i];
        cores.push_back(make_core(i, d, left, shape[i], right, std::vector<double>(left * shape[i] * right, 0.0)));
    }
    return TTTensor(std::move(cores));
}

Matrix TTTensor::left_unfolding(std::size_t i) const
{
    const DenseTensor& c = cores_[i];
    return Matrix(left_rank(i) * shape_[i], right_rank(i), std::vector<double>(c.values().begin(), c.values().end()));
}

Matrix TTTensor::right_unfolding(std::size_t i) const
{
    const DenseTensor& c = cores_[i];
    return Matrix(left_rank(i), shape_[i] * right_rank(i), std::vector<double>(c.values().begin(), c.values().end()));
}

TTTensor TTTensor::with_core(std::size_t i, DenseTensor core) const
{
    std::vector<DenseTensor> cores = cores_;
    cores.at(i) = std::move(core);
    return TTTensor(std::move(cores));
}

std::size_t TTTensor::parameter_count() const
{
    std::size_t count = 0;
    for (const DenseTensor& c : cores_) {
        count += c.size();
    }
    return count;
}

// ---------------------------------------------------------------------------
// Operations

DenseTensor tt_evaluate(const TTTensor& t)
{
    const std::size_t d = t.order();
    static_cast<void>(t.shape().dense_size());  // throws when too large

    // acc holds W_1 ∘ … ∘ W_i flattened to (n_1⋯n_i) × r_i.
    RowMajorMatrix acc = t.left_unfolding(0).view();
    for (std::size_t i = 1; i < d; ++i) {
        const Matrix core = t.right_unfolding(i);
        RowMajorMatrix next = acc * core.view();
        const Eigen::Index rows = next.rows() * static_cast<Eigen::Index>(t.shape()[i]);
        const auto cols = static_cast<Eigen::Index>(t.right_rank(i));
        acc = Eigen::Map<RowMajorMatrix>(next.data(), rows, cols);
    }
    return DenseTensor(t.shape(), std::vector<double>(acc.data(), acc.data() + acc.size()));
}

TTTensor orthogonalize_left(const TTTensor& t)
{
    const std::size_t d = t.order();
    std::vector<DenseTensor> cores = t.cores();
    RowMajorMatrix carry = RowMajorMatrix::Identity(1, 1);
    std::size_t left = 1;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const std::size_t n = t.shape()[i];
        const std::size_t right = t.right_rank(i);
        // carry · W_i as (left·n) × right
        const Matrix unfolded = t.right_unfolding(i);
        RowMajorMatrix merged = carry * unfolded.view();
        const Matrix block(left * n, right, std::vector<double>(merged.data(), merged.data() + merged.size()));
        QrResult f = qr(block);
        const std::size_t k = f.Q.cols();
        cores[i] = TTTensor::make_core(i, d, left, n, k, std::move(f.Q).release());
        carry = f.R.view();
        left = k;
    }
    const Matrix lastUnfolded = t.right_unfolding(d - 1);
    RowMajorMatrix last = carry * lastUnfolded.view();
    cores[d - 1] = TTTensor::make_core(d - 1, d, left, t.shape()[d - 1], 1,
                                       std::vector<double>(last.data(), last.data() + last.size()));
    return TTTensor(std::move(cores), Orthogonality::left);
}

TTTensor orthogonalize_right(const TTTensor& t)
{
    const std::size_t d = t.order();
    std::vector<DenseTensor> cores = t.cores();
    RowMajorMatrix carry = RowMajorMatrix::Identity(1, 1);
    std::size_t right = 1;
    for (std::size_t i = d - 1; i > 0; --i) {
        const std::size_t n = t.shape()[i];
        const std::size_t left = t.left_rank(i);
        // W_i · carry as left × (n·right)
        const Matrix unfolded = t.left_unfolding(i);
        RowMajorMatrix merged = unfolded.view() * carry;
        const Matrix block(left, n * right, std::vector<double>(merged.data(), merged.data() + merged.size()));
        RqResult f = rq_row_orthonormal(block);
        const std::size_t k = f.Q.rows();
        cores[i] = TTTensor::make_core(i, d, k, n, right, std::move(f.Q).release());
        carry = f.R.view();
        right = k;
    }
    const Matrix firstUnfolded = t.left_unfolding(0);
    RowMajorMatrix first = firstUnfolded.view() * carry;
    cores[0] = TTTensor::make_core(0, d, 1, t.shape()[0], right,
                                   std::vector<double>(first.data(), first.data() + first.size()));
    return TTTensor(std::move(cores), Orthogonality::right);
}

double tt_norm(const TTTensor& t)
{
    const TTTensor left = orthogonalize_left(t);
    return norm(left.core(left.order() - 1));
}

TTTensor tt_round(const TTTensor& t, const RankTuple& target)
{
    const std::size_t d = t.order();
    if (target.size() + 1 != d) {
        throw RankError("target rank tuple length must be order - 1");
    }
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (target[i] > t.ranks()[i]) {
            throw RankError("target rank r_" + std::to_string(i + 1) + " exceeds the current rank");
        }
    }

    const TTTensor right = orthogonalize_right(t);
    std::vector<DenseTensor> cores = right.cores();
    RowMajorMatrix carry = RowMajorMatrix::Identity(1, 1);
    std::size_t left = 1;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const std::size_t n = t.shape()[i];
        const Matrix unfolded = right.right_unfolding(i);
        RowMajorMatrix merged = carry * unfolded.view();
        const std::size_t cols = right.right_rank(i);
        const Matrix block(left * n, cols, std::vector<double>(merged.data(), merged.data() + merged.size()));
        SvdResult f = truncated_svd(block, target[i]);
        std::size_t k = f.S.size();
        RowMajorMatrix u = f.U.view();
        RowMajorMatrix svt = f.S.empty() ? RowMajorMatrix() : RowMajorMatrix(f.Vt.view());
        for (std::size_t j = 0; j < k; ++j) {
            svt.row(static_cast<Eigen::Index>(j)) *= f.S[j];
        }
        // Pad with zero directions when the block is narrower than the target rank.
        if (k < target[i]) {
            u.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(target[i]));
            svt.conservativeResize(static_cast<Eigen::Index>(target[i]), Eigen::NoChange);
            for (std::size_t j = k; j < target[i]; ++j) {
                u.col(static_cast<Eigen::Index>(j)).setZero();
                svt.row(static_cast<Eigen::Index>(j)).setZero();
            }
            k = target[i];
        }
        cores[i] = TTTensor::make_core(i, d, left, n, k, std::vector<double>(u.data(), u.data() + u.size()));
        carry = svt;
        left = k;
    }
    const Matrix lastUnfolded = right.right_unfolding(d - 1);
    RowMajorMatrix last = carry * lastUnfolded.view();
    cores[d - 1] = TTTensor::make_core(d - 1, d, left, t.shape()[d - 1], 1,
                                       std::vector<double>(last.data(), last.data() + last.size()));
    return TTTensor(std::move(cores), Orthogonality::left);
}

TTTensor tt_scaled(const TTTensor& t, double factor)
{
    const std::size_t target = t.orthogonality() == Orthogonality::left ? t.order() - 1 : 0;
    std::vector<DenseTensor> cores = t.cores();
    cores[target] *= factor;
    return TTTensor(std::move(cores), t.orthogonality());
}

}  // namespace ttsketch
