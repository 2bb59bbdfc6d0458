#pragma once

#include "ttsketch/tensor.hpp"

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ttsketch {

/// TT ranks r_1..r_{d-1}; every entry is at least one.
class RankTuple {
public:
    RankTuple() = default;
    explicit RankTuple(std::vector<std::size_t> ranks);
    RankTuple(std::initializer_list<std::size_t> ranks) : RankTuple(std::vector<std::size_t>(ranks)) {}

    /// The same rank at each of `count` positions.
    static RankTuple uniform(std::size_t count, std::size_t rank);

    [[nodiscard]] std::size_t size() const { return ranks_.size(); }
    [[nodiscard]] std::size_t operator[](std::size_t i) const { return ranks_[i]; }
    [[nodiscard]] const std::vector<std::size_t>& values() const { return ranks_; }
    [[nodiscard]] std::size_t max() const;

    friend bool operator==(const RankTuple&, const RankTuple&) = default;

private:
    std::vector<std::size_t> ranks_;
};

/// Largest rank each matricization admits: min(∏_{j<=i} n_j, ∏_{j>i} n_j).
[[nodiscard]] RankTuple max_ranks(const Shape& shape);

/// r_i = min(r, ∏_{j<=i} n_j, ∏_{j>i} n_j).
[[nodiscard]] RankTuple clip_ranks(const Shape& shape, std::size_t rank);

/// Entrywise clip of an arbitrary rank tuple to max_ranks(shape).
[[nodiscard]] RankTuple clip_ranks(const Shape& shape, const RankTuple& ranks);

/// Throws RankError unless `ranks` has d-1 entries within max_ranks(shape).
void validate_ranks(const Shape& shape, const RankTuple& ranks);

enum class Orthogonality { none, left, right };

/// Tensor train W_1 ∘ W_2 ∘ … ∘ W_d. The first core is n_1×r_1, inner cores
/// r_{i-1}×n_i×r_i and the last core r_{d-1}×n_d. Order is at least two.
///
/// The orthogonality tag is a claim made by whoever built the value; it is
/// not re-verified on construction.
class TTTensor {
public:
    TTTensor() = default;
    explicit TTTensor(std::vector<DenseTensor> cores, Orthogonality orthogonality = Orthogonality::none);

    /// All-zero train of the given ranks.
    static TTTensor zeros(const Shape& shape, const RankTuple& ranks);

    /// Core i (0-based) from its (left rank, extent, right rank) data, shaped as above.
    static DenseTensor make_core(std::size_t i, std::size_t order, std::size_t leftRank, std::size_t extent,
                                 std::size_t rightRank, std::vector<double> values);

    [[nodiscard]] std::size_t order() const { return cores_.size(); }
    [[nodiscard]] const Shape& shape() const { return shape_; }
    [[nodiscard]] const RankTuple& ranks() const { return ranks_; }
    [[nodiscard]] Orthogonality orthogonality() const { return orthogonality_; }

    [[nodiscard]] const DenseTensor& core(std::size_t i) const { return cores_[i]; }
    [[nodiscard]] const std::vector<DenseTensor>& cores() const { return cores_; }

    /// r_{i-1} for core i, with the boundary rank r_0 = 1.
    [[nodiscard]] std::size_t left_rank(std::size_t i) const { return i == 0 ? 1 : ranks_[i - 1]; }
    /// r_i for core i, with the boundary rank r_d = 1.
    [[nodiscard]] std::size_t right_rank(std::size_t i) const { return i + 1 == order() ? 1 : ranks_[i]; }

    /// Core i flattened to (r_{i-1}·n_i) × r_i.
    [[nodiscard]] Matrix left_unfolding(std::size_t i) const;
    /// Core i flattened to r_{i-1} × (n_i·r_i).
    [[nodiscard]] Matrix right_unfolding(std::size_t i) const;

    /// Copy with core i replaced; the orthogonality tag is dropped.
    [[nodiscard]] TTTensor with_core(std::size_t i, DenseTensor core) const;

    /// Number of stored core entries.
    [[nodiscard]] std::size_t parameter_count() const;

private:
    std::vector<DenseTensor> cores_;
    Shape shape_;
    RankTuple ranks_;
    Orthogonality orthogonality_ = Orthogonality::none;
};

/// Dense tensor represented by the train.
[[nodiscard]] DenseTensor tt_evaluate(const TTTensor& t);

/// Euclidean norm computed from a left-orthogonalized copy.
[[nodiscard]] double tt_norm(const TTTensor& t);

/// Cores 1..d-1 get orthonormal {1,2}-unfoldings; the last core carries the rest.
[[nodiscard]] TTTensor orthogonalize_left(const TTTensor& t);

/// Cores 2..d get orthonormal rows in their {1}-unfoldings; the first core carries the rest.
[[nodiscard]] TTTensor orthogonalize_right(const TTTensor& t);

/// Recompress to `target` ranks: right-orthogonalize, then truncate left to right
/// with truncated SVDs. Throws RankError if a target rank exceeds the current one.
[[nodiscard]] TTTensor tt_round(const TTTensor& t, const RankTuple& target);

/// Copy scaled by `factor`, applied to the core that is not orthogonal.
[[nodiscard]] TTTensor tt_scaled(const TTTensor& t, double factor);

}  // namespace ttsketch
