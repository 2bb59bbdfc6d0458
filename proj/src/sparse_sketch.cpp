#include "sparse_sketch.hpp"

#include "ttsketch/linalg.hpp"

#include <utility>
#include <vector>

namespace ttsketch::detail {

namespace {

/// Rows of b_{j+1} that can be nonzero: one per distinct multi-index prefix
/// (i_1..i_j) among the stored entries, each a dense vector of length s_j.
/// A row is identified by the first entry of x that carries its prefix.
struct SparseRows {
    std::vector<std::size_t> representative;
    std::vector<double> data;
    std::size_t width = 0;

    [[nodiscard]] std::size_t count() const { return representative.size(); }
};

}  // namespace

TTTensor sparse_randomized_tt_svd(const SparseTensor& x, const RankTuple& sketch, const RngStream& rng)
{
    const std::size_t d = x.order();
    const std::size_t entries = x.nnz();
    const std::vector<std::size_t>& dims = x.shape().dims();

    // commonPrefix[e]: number of leading coordinates entry e shares with entry e-1.
    std::vector<std::size_t> commonPrefix(entries, 0);
    for (std::size_t e = 1; e < entries; ++e) {
        const auto prev = x.index(e - 1);
        const auto cur = x.index(e);
        std::size_t m = 0;
        while (m < d && prev[m] == cur[m]) {
            ++m;
        }
        commonPrefix[e] = m;
    }

    // hashes[e·d + m]: prefix hash of the first m coordinates of entry e, m < d.
    std::vector<std::uint64_t> hashes(entries * d, 0);
    for (std::size_t e = 0; e < entries; ++e) {
        const auto idx = x.index(e);
        for (std::size_t m = 1; m < d; ++m) {
            hashes[e * d + m] = extend_prefix_hash(hashes[e * d + m - 1], idx[m - 1]);
        }
    }

    SparseRows rows;
    rows.width = 1;
    rows.representative.resize(entries);
    for (std::size_t e = 0; e < entries; ++e) {
        rows.representative[e] = e;
    }
    rows.data.assign(x.values().begin(), x.values().end());

    std::vector<DenseTensor> cores(d);
    for (std::size_t c = d - 1; c >= 1; --c) {
        const std::size_t n = dims[c];
        const std::size_t sl = sketch[c - 1];
        const std::size_t sr = rows.width;
        const GaussianField field(rng.substream(c + 1));
        std::vector<std::uint64_t> keys(sl);
        for (std::size_t k = 0; k < sl; ++k) {
            keys[k] = field.row_key(k);
        }

        // a_j = g ∘ b_{j+1}, touching only the sketch columns of occupied prefixes.
        RowMajorMatrix a = RowMajorMatrix::Zero(static_cast<Eigen::Index>(sl), static_cast<Eigen::Index>(n * sr));
        Eigen::VectorXd column(static_cast<Eigen::Index>(sl));
        for (std::size_t r = 0; r < rows.count(); ++r) {
            const std::size_t rep = rows.representative[r];
            if (r == 0 || commonPrefix[rep] < c) {
                const std::uint64_t h = hashes[rep * d + c];
                for (std::size_t k = 0; k < sl; ++k) {
                    column(static_cast<Eigen::Index>(k)) = counter_gaussian(keys[k], h);
                }
            }
            const std::size_t slot = x.index(rep)[c];
            const Eigen::Map<const Eigen::RowVectorXd> row(rows.data.data() + r * sr, static_cast<Eigen::Index>(sr));
            a.middleCols(static_cast<Eigen::Index>(slot * sr), static_cast<Eigen::Index>(sr)).noalias() +=
                column * row;
        }

        RqResult f = rq_row_orthonormal(Matrix(a));
        const ConstMatrixView q = std::as_const(f.Q).view();

        // b_j = b_{j+1} ∘ W_j, merging rows that share the shorter prefix.
        SparseRows next;
        next.width = sl;
        for (std::size_t r = 0; r < rows.count(); ++r) {
            const std::size_t rep = rows.representative[r];
            if (r == 0 || commonPrefix[rep] < c) {
                next.representative.push_back(rep);
                next.data.resize(next.data.size() + sl, 0.0);
            }
            const std::size_t slot = x.index(rep)[c];
            const Eigen::Map<const Eigen::VectorXd> row(rows.data.data() + r * sr, static_cast<Eigen::Index>(sr));
            Eigen::Map<Eigen::VectorXd> target(next.data.data() + next.data.size() - sl, static_cast<Eigen::Index>(sl));
            target.noalias() +=
                q.middleCols(static_cast<Eigen::Index>(slot * sr), static_cast<Eigen::Index>(sr)) * row;
        }

        cores[c] = TTTensor::make_core(c, d, f.Q.rows(), n, sr, std::move(f.Q).release());
        rows = std::move(next);
    }

    std::vector<double> first(dims[0] * rows.width, 0.0);
    for (std::size_t r = 0; r < rows.count(); ++r) {
        const std::size_t slot = x.index(rows.representative[r])[0];
        for (std::size_t k = 0; k < rows.width; ++k) {
            first[slot * rows.width + k] = rows.data[r * rows.width + k];
        }
    }
    cores[0] = TTTensor::make_core(0, d, 1, dims[0], rows.width, std::move(first));
    return TTTensor(std::move(cores), Orthogonality::right);
}

}  // namespace ttsketch::detail
