#include "ttsketch/tensor.hpp"

#include "ttsketch/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ttsketch {

namespace {

bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out)
{
    return __builtin_mul_overflow(a, b, &out);
}

}  // namespace

// ---------------------------------------------------------------------------
// Shape / ModeSet

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims))
{
    if (dims_.empty()) {
        throw ShapeError("shape must have order >= 1");
    }
    for (std::size_t n : dims_) {
        if (n == 0) {
            throw ShapeError("shape extents must be >= 1");
        }
    }
}

std::optional<std::uint64_t> Shape::element_count() const
{
    std::uint64_t count = 1;
    for (std::size_t n : dims_) {
        if (mul_overflows(count, n, count)) {
            return std::nullopt;
        }
    }
    return count;
}

std::size_t Shape::dense_size() const
{
    const auto count = element_count();
    if (!count || *count > kMaxDenseElements) {
        throw ShapeError("shape too large for dense materialization");
    }
    return static_cast<std::size_t>(*count);
}

std::size_t Shape::product(std::size_t first, std::size_t last) const
{
    std::uint64_t count = 1;
    for (std::size_t i = first; i < last; ++i) {
        if (mul_overflows(count, dims_[i], count)) {
            throw ShapeError("extent product overflows");
        }
    }
    return static_cast<std::size_t>(count);
}

ModeSet::ModeSet(std::vector<std::size_t> modes) : modes_(std::move(modes))
{
    if (modes_.empty()) {
        throw InvalidModeSet("mode set must be nonempty");
    }
    std::sort(modes_.begin(), modes_.end());
    if (std::adjacent_find(modes_.begin(), modes_.end()) != modes_.end()) {
        throw InvalidModeSet("mode set contains duplicates");
    }
}

ModeSet ModeSet::leading(std::size_t count)
{
    std::vector<std::size_t> modes(count);
    std::iota(modes.begin(), modes.end(), std::size_t{0});
    return ModeSet(std::move(modes));
}

bool ModeSet::contains(std::size_t mode) const
{
    return std::binary_search(modes_.begin(), modes_.end(), mode);
}

void ModeSet::validate(std::size_t order) const
{
    if (modes_.empty()) {
        throw InvalidModeSet("mode set must be nonempty");
    }
    if (modes_.back() >= order) {
        throw InvalidModeSet("mode " + std::to_string(modes_.back()) + " out of range for order " +
                             std::to_string(order));
    }
}

std::vector<std::size_t> ModeSet::complement(std::size_t order) const
{
    std::vector<std::size_t> rest;
    for (std::size_t m = 0; m < order; ++m) {
        if (!contains(m)) {
            rest.push_back(m);
        }
    }
    return rest;
}

// ---------------------------------------------------------------------------
// DenseTensor / SparseTensor

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)), values_(shape_.dense_size(), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values))
{
    if (values_.size() != shape_.dense_size()) {
        throw ShapeError("value count does not match shape");
    }
}

double DenseTensor::at(std::span<const std::size_t> index) const
{
    return values_[linear_index(shape_, index)];
}

double& DenseTensor::at(std::span<const std::size_t> index)
{
    return values_[linear_index(shape_, index)];
}

DenseTensor DenseTensor::reshaped(Shape shape) const&
{
    return DenseTensor(*this).reshaped(std::move(shape));
}

DenseTensor DenseTensor::reshaped(Shape shape) &&
{
    if (shape.dense_size() != values_.size()) {
        throw ShapeError("reshape changes element count");
    }
    return DenseTensor(std::move(shape), std::move(values_));
}

DenseTensor& DenseTensor::operator*=(double factor)
{
    for (double& v : values_) {
        v *= factor;
    }
    return *this;
}

SparseTensor::SparseTensor(Shape shape, std::vector<std::size_t> indices, std::vector<double> values)
    : shape_(std::move(shape))
{
    const std::size_t d = shape_.order();
    if (indices.size() != values.size() * d) {
        throw ShapeError("sparse index list does not match value count");
    }
    const std::size_t count = values.size();
    for (std::size_t e = 0; e < count; ++e) {
        for (std::size_t m = 0; m < d; ++m) {
            if (indices[e * d + m] >= shape_[m]) {
                throw ShapeError("sparse multi-index out of range");
            }
        }
    }

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(indices.begin() + a * d, indices.begin() + (a + 1) * d,
                                            indices.begin() + b * d, indices.begin() + (b + 1) * d);
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t k = 1; k < count; ++k) {
        if (!less(order[k - 1], order[k])) {
            throw DomainError("sparse tensor contains duplicate multi-indices");
        }
    }

    indices_.reserve(count * d);
    values_.reserve(count);
    for (std::size_t e : order) {
        if (values[e] == 0.0) {
            continue;
        }
        indices_.insert(indices_.end(), indices.begin() + e * d, indices.begin() + (e + 1) * d);
        values_.push_back(values[e]);
    }
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values))
{
    if (values_.size() != rows_ * cols_) {
        throw ShapeError("matrix value count does not match dimensions");
    }
}

Matrix::Matrix(const RowMajorMatrix& m)
    : rows_(static_cast<std::size_t>(m.rows())),
      cols_(static_cast<std::size_t>(m.cols())),
      values_(m.data(), m.data() + m.size())
{
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix id(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        id(i, i) = 1.0;
    }
    return id;
}

Matrix Matrix::transposed() const
{
    Matrix t(cols_, rows_);
    t.view() = view().transpose();
    return t;
}

double Matrix::frobenius_norm() const
{
    return view().norm();
}

// ---------------------------------------------------------------------------
// Operations

std::size_t linear_index(const Shape& shape, std::span<const std::size_t> index)
{
    if (index.size() != shape.order()) {
        throw ShapeError("multi-index has wrong order");
    }
    std::size_t offset = 0;
    for (std::size_t m = 0; m < index.size(); ++m) {
        if (index[m] >= shape[m]) {
            throw ShapeError("multi-index out of range");
        }
        offset = offset * shape[m] + index[m];
    }
    return offset;
}

DenseTensor permute_modes(const DenseTensor& x, std::span<const std::size_t> permutation)
{
    const std::size_t d = x.order();
    if (permutation.size() != d) {
        throw InvalidModeSet("permutation length differs from tensor order");
    }
    std::vector<bool> seen(d, false);
    for (std::size_t p : permutation) {
        if (p >= d || seen[p]) {
            throw InvalidModeSet("not a permutation of the tensor modes");
        }
        seen[p] = true;
    }

    std::vector<std::size_t> srcStride(d);
    std::size_t stride = 1;
    for (std::size_t m = d; m-- > 0;) {
        srcStride[m] = stride;
        stride *= x.shape()[m];
    }

    std::vector<std::size_t> dims(d);
    std::vector<std::size_t> strides(d);
    bool identity = true;
    for (std::size_t k = 0; k < d; ++k) {
        dims[k] = x.shape()[permutation[k]];
        strides[k] = srcStride[permutation[k]];
        identity = identity && permutation[k] == k;
    }
    if (identity) {
        return x;
    }

    DenseTensor out{Shape(dims)};
    const std::span<const double> src = x.values();
    std::span<double> dst = out.values();

    // Odometer over all but the last result mode; inner loop walks the last.
    const std::size_t inner = dims[d - 1];
    const std::size_t innerStride = strides[d - 1];
    std::vector<std::size_t> counter(d, 0);
    std::size_t base = 0;
    for (std::size_t pos = 0; pos < dst.size(); pos += inner) {
        for (std::size_t i = 0; i < inner; ++i) {
            dst[pos + i] = src[base + i * innerStride];
        }
        for (std::size_t k = d - 1; k-- > 0;) {
            if (++counter[k] < dims[k]) {
                base += strides[k];
                break;
            }
            base -= (dims[k] - 1) * strides[k];
            counter[k] = 0;
        }
    }
    return out;
}

Matrix matricize(const DenseTensor& x, const ModeSet& rowModes)
{
    rowModes.validate(x.order());
    const std::vector<std::size_t> colModes = rowModes.complement(x.order());

    std::vector<std::size_t> permutation = rowModes.modes();
    permutation.insert(permutation.end(), colModes.begin(), colModes.end());

    std::size_t rows = 1;
    for (std::size_t m : rowModes.modes()) {
        rows *= x.shape()[m];
    }
    const std::size_t cols = x.size() / rows;

    Matrix m(rows, cols, permute_modes(x, permutation).release());
    m.set_provenance({x.shape(), rowModes});
    return m;
}

DenseTensor dematricize(const Matrix& m, const Shape& target, const ModeSet& rowModes)
{
    rowModes.validate(target.order());
    const std::vector<std::size_t> colModes = rowModes.complement(target.order());

    std::vector<std::size_t> permuted;
    std::vector<std::size_t> permutation = rowModes.modes();
    permutation.insert(permutation.end(), colModes.begin(), colModes.end());
    std::size_t rows = 1;
    for (std::size_t mode : permutation) {
        permuted.push_back(target[mode]);
    }
    for (std::size_t mode : rowModes.modes()) {
        rows *= target[mode];
    }
    if (rows != m.rows() || target.dense_size() != m.rows() * m.cols()) {
        throw ShapeError("matrix dimensions do not match target shape and mode split");
    }

    std::vector<std::size_t> inverse(permutation.size());
    for (std::size_t k = 0; k < permutation.size(); ++k) {
        inverse[permutation[k]] = k;
    }
    DenseTensor flat(Shape(permuted), std::vector<double>(m.values().begin(), m.values().end()));
    return permute_modes(flat, inverse);
}

DenseTensor contract(const DenseTensor& x, std::span<const std::size_t> xModes, const DenseTensor& y,
                     std::span<const std::size_t> yModes)
{
    if (xModes.size() != yModes.size()) {
        throw ContractionShapeError("contraction mode lists differ in length");
    }
    const std::size_t dx = x.order();
    const std::size_t dy = y.order();
    std::vector<bool> xUsed(dx, false);
    std::vector<bool> yUsed(dy, false);
    std::size_t inner = 1;
    for (std::size_t k = 0; k < xModes.size(); ++k) {
        if (xModes[k] >= dx || yModes[k] >= dy || xUsed[xModes[k]] || yUsed[yModes[k]]) {
            throw InvalidModeSet("contraction modes out of range or repeated");
        }
        xUsed[xModes[k]] = true;
        yUsed[yModes[k]] = true;
        if (x.shape()[xModes[k]] != y.shape()[yModes[k]]) {
            throw ContractionShapeError("paired contraction modes have different extents");
        }
        inner *= x.shape()[xModes[k]];
    }

    std::vector<std::size_t> xPerm;
    std::vector<std::size_t> yPerm(yModes.begin(), yModes.end());
    std::vector<std::size_t> outDims;
    for (std::size_t m = 0; m < dx; ++m) {
        if (!xUsed[m]) {
            xPerm.push_back(m);
            outDims.push_back(x.shape()[m]);
        }
    }
    xPerm.insert(xPerm.end(), xModes.begin(), xModes.end());
    for (std::size_t m = 0; m < dy; ++m) {
        if (!yUsed[m]) {
            yPerm.push_back(m);
            outDims.push_back(y.shape()[m]);
        }
    }
    if (outDims.empty()) {
        outDims.push_back(1);
    }

    const DenseTensor xp = permute_modes(x, xPerm);
    const DenseTensor yp = permute_modes(y, yPerm);
    const auto xRows = static_cast<Eigen::Index>(x.size() / inner);
    const auto yCols = static_cast<Eigen::Index>(y.size() / inner);
    const auto k = static_cast<Eigen::Index>(inner);

    DenseTensor out{Shape(outDims)};
    ConstMatrixView a(xp.values().data(), xRows, k);
    ConstMatrixView b(yp.values().data(), k, yCols);
    MatrixView c(out.values().data(), xRows, yCols);
    c.noalias() = a * b;
    return out;
}

DenseTensor contract(const DenseTensor& x, std::initializer_list<std::size_t> xModes, const DenseTensor& y,
                     std::initializer_list<std::size_t> yModes)
{
    return contract(x, std::span<const std::size_t>(xModes.begin(), xModes.size()), y,
                    std::span<const std::size_t>(yModes.begin(), yModes.size()));
}

double inner(const DenseTensor& x, const DenseTensor& y)
{
    if (x.shape() != y.shape()) {
        throw ShapeError("inner product of tensors with different shapes");
    }
    const auto n = static_cast<Eigen::Index>(x.size());
    return Eigen::Map<const Eigen::VectorXd>(x.values().data(), n)
        .dot(Eigen::Map<const Eigen::VectorXd>(y.values().data(), n));
}

double norm(const DenseTensor& x)
{
    return Eigen::Map<const Eigen::VectorXd>(x.values().data(), static_cast<Eigen::Index>(x.size())).norm();
}

DenseTensor sparse_to_dense(const SparseTensor& x)
{
    DenseTensor out(x.shape());
    for (std::size_t e = 0; e < x.nnz(); ++e) {
        out.at(x.index(e)) = x.value(e);
    }
    return out;
}

DenseTensor subtract(const DenseTensor& x, const DenseTensor& y)
{
    if (x.shape() != y.shape()) {
        throw ShapeError("subtraction of tensors with different shapes");
    }
    DenseTensor out = x;
    std::span<double> v = out.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] -= y[i];
    }
    return out;
}

}  // namespace ttsketch
