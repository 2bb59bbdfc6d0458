#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace ttsketch {

/// Dense materializations above this many elements are refused.
inline constexpr std::uint64_t kMaxDenseElements = std::uint64_t{1} << 40;

/// Extents n_1..n_d of a tensor. Every extent is at least one.
class Shape {
public:
    Shape() = default;
    explicit Shape(std::vector<std::size_t> dims);
    Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

    [[nodiscard]] std::size_t order() const { return dims_.size(); }
    [[nodiscard]] std::size_t operator[](std::size_t mode) const { return dims_[mode]; }
    [[nodiscard]] const std::vector<std::size_t>& dims() const { return dims_; }

    /// Product of all extents, or nullopt if it does not fit in 64 bits.
    [[nodiscard]] std::optional<std::uint64_t> element_count() const;

    /// Element count for a dense allocation; throws ShapeError above kMaxDenseElements.
    [[nodiscard]] std::size_t dense_size() const;

    /// Product of the extents of modes [first, last); throws ShapeError on overflow.
    [[nodiscard]] std::size_t product(std::size_t first, std::size_t last) const;

    friend bool operator==(const Shape&, const Shape&) = default;

private:
    std::vector<std::size_t> dims_;
};

/// Nonempty set of distinct 0-based mode indices, kept in ascending order.
class ModeSet {
public:
    ModeSet() = default;
    explicit ModeSet(std::vector<std::size_t> modes);
    ModeSet(std::initializer_list<std::size_t> modes) : ModeSet(std::vector<std::size_t>(modes)) {}

    /// Modes 0..count-1.
    static ModeSet leading(std::size_t count);

    [[nodiscard]] std::size_t size() const { return modes_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& modes() const { return modes_; }
    [[nodiscard]] bool contains(std::size_t mode) const;

    /// Throws InvalidModeSet unless every mode is below `order`.
    void validate(std::size_t order) const;

    /// Modes of [0, order) not in this set, ascending. May be empty.
    [[nodiscard]] std::vector<std::size_t> complement(std::size_t order) const;

    friend bool operator==(const ModeSet&, const ModeSet&) = default;

private:
    std::vector<std::size_t> modes_;
};

/// Order-d array of doubles stored last-index-fastest.
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(Shape shape);
    DenseTensor(Shape shape, std::vector<double> values);

    [[nodiscard]] const Shape& shape() const { return shape_; }
    [[nodiscard]] std::size_t order() const { return shape_.order(); }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::span<double> values() { return values_; }
    [[nodiscard]] std::vector<double> release() && { return std::move(values_); }

    [[nodiscard]] double operator[](std::size_t linear) const { return values_[linear]; }
    [[nodiscard]] double& operator[](std::size_t linear) { return values_[linear]; }

    [[nodiscard]] double at(std::span<const std::size_t> index) const;
    [[nodiscard]] double& at(std::span<const std::size_t> index);
    [[nodiscard]] double at(std::initializer_list<std::size_t> index) const
    {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }

    /// Same values under a new shape with equal element count.
    [[nodiscard]] DenseTensor reshaped(Shape shape) const&;
    [[nodiscard]] DenseTensor reshaped(Shape shape) &&;

    DenseTensor& operator*=(double factor);

private:
    Shape shape_;
    std::vector<double> values_;
};

/// Coordinate-format tensor. Entries are sorted in canonical linear order,
/// unique, and nonzero.
class SparseTensor {
public:
    SparseTensor() = default;

    /// `indices` holds nnz·d coordinates entry after entry. Entries are sorted,
    /// explicit zeros dropped; duplicates or out-of-range coordinates throw.
    SparseTensor(Shape shape, std::vector<std::size_t> indices, std::vector<double> values);

    [[nodiscard]] const Shape& shape() const { return shape_; }
    [[nodiscard]] std::size_t order() const { return shape_.order(); }
    [[nodiscard]] std::size_t nnz() const { return values_.size(); }

    [[nodiscard]] std::span<const std::size_t> index(std::size_t entry) const
    {
        return {indices_.data() + entry * order(), order()};
    }
    [[nodiscard]] double value(std::size_t entry) const { return values_[entry]; }
    [[nodiscard]] std::span<const double> values() const { return values_; }

private:
    Shape shape_;
    std::vector<std::size_t> indices_;
    std::vector<double> values_;
};

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixView = Eigen::Map<RowMajorMatrix>;
using ConstMatrixView = Eigen::Map<const RowMajorMatrix>;

/// Shape and row modes a matrix was flattened from.
struct MatricizationRecord {
    Shape shape;
    ModeSet rowModes;
};

/// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    explicit Matrix(const RowMajorMatrix& m);

    static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::span<double> values() { return values_; }
    [[nodiscard]] std::vector<double> release() && { return std::move(values_); }

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    [[nodiscard]] double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

    [[nodiscard]] ConstMatrixView view() const
    {
        return {values_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
    }
    [[nodiscard]] MatrixView view()
    {
        return {values_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
    }

    [[nodiscard]] Matrix transposed() const;
    [[nodiscard]] double frobenius_norm() const;

    [[nodiscard]] const std::optional<MatricizationRecord>& provenance() const { return provenance_; }
    void set_provenance(MatricizationRecord record) { provenance_ = std::move(record); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
    std::optional<MatricizationRecord> provenance_;
};

/// Canonical linear offset of a multi-index (last index fastest).
[[nodiscard]] std::size_t linear_index(const Shape& shape, std::span<const std::size_t> index);

/// Reorder modes: mode k of the result is mode `permutation[k]` of `x`.
[[nodiscard]] DenseTensor permute_modes(const DenseTensor& x, std::span<const std::size_t> permutation);

/// α-matricization. Rows enumerate the modes in `rowModes` (ascending), columns
/// the remaining modes (ascending); each group is linearized last-index-fastest.
/// An α covering every mode yields a single column.
[[nodiscard]] Matrix matricize(const DenseTensor& x, const ModeSet& rowModes);

/// Inverse of matricize for the given target shape and row modes.
[[nodiscard]] DenseTensor dematricize(const Matrix& m, const Shape& target, const ModeSet& rowModes);

/// Contract mode xModes[k] of x with mode yModes[k] of y for every k. The result
/// carries the free modes of x followed by the free modes of y, each in original
/// order. A full contraction yields a tensor of shape (1).
[[nodiscard]] DenseTensor contract(const DenseTensor& x, std::span<const std::size_t> xModes,
                                   const DenseTensor& y, std::span<const std::size_t> yModes);
[[nodiscard]] DenseTensor contract(const DenseTensor& x, std::initializer_list<std::size_t> xModes,
                                   const DenseTensor& y, std::initializer_list<std::size_t> yModes);

[[nodiscard]] double inner(const DenseTensor& x, const DenseTensor& y);
[[nodiscard]] double norm(const DenseTensor& x);

[[nodiscard]] DenseTensor sparse_to_dense(const SparseTensor& x);

/// x - y for equal shapes.
[[nodiscard]] DenseTensor subtract(const DenseTensor& x, const DenseTensor& y);

}  // namespace ttsketch
