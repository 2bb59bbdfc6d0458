#include "ttsketch/generators.hpp"

#include "ttsketch/error.hpp"
#include "ttsketch/linalg.hpp"

#include <cmath>
#include <map>

namespace ttsketch {

DenseTensor gaussian_dense(const Shape& shape, const RngStream& rng)
{
    DenseTensor out(shape);
    std::span<double> v = out.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = rng.gaussian_at(i);
    }
    return out;
}

SparseTensor gaussian_sparse(const Shape& shape, std::size_t nnz, const RngStream& rng)
{
    const auto count = shape.element_count();
    if (count && nnz > *count) {
        throw DomainError("gaussian_sparse: more nonzeros requested than the shape has entries");
    }
    const std::size_t d = shape.order();
    RngStream positions = rng.substream(0);
    RngStream values = rng.substream(1);

    std::map<std::vector<std::size_t>, double> entries;
    std::vector<std::size_t> index(d);
    for (std::size_t e = 0; e < nnz; ++e) {
        for (std::size_t m = 0; m < d; ++m) {
            index[m] = positions.next_below(shape[m]);
        }
        entries[index] = values.next_gaussian();
    }

    std::vector<std::size_t> flat;
    std::vector<double> vals;
    flat.reserve(entries.size() * d);
    vals.reserve(entries.size());
    for (const auto& [key, value] : entries) {
        flat.insert(flat.end(), key.begin(), key.end());
        vals.push_back(value);
    }
    return SparseTensor(shape, std::move(flat), std::move(vals));
}

TTTensor random_tt(const Shape& shape, const RankTuple& ranks, const RngStream& rng)
{
    validate_ranks(shape, ranks);
    const std::size_t d = shape.order();
    std::vector<DenseTensor> cores;
    cores.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t left = i == 0 ? 1 : ranks[i - 1];
        const std::size_t right = i + 1 == d ? 1 : ranks[i];
        const RngStream coreRng = rng.substream(i);
        std::vector<double> values(left * shape[i] * right);
        for (std::size_t k = 0; k < values.size(); ++k) {
            values[k] = coreRng.gaussian_at(k);
        }
        cores.push_back(TTTensor::make_core(i, d, left, shape[i], right, std::move(values)));
    }
    return TTTensor(std::move(cores));
}

std::vector<double> decay_profile(std::size_t count, double decayExponent, std::size_t cutoff)
{
    std::vector<double> s(count, 0.0);
    for (std::size_t k = 0; k < count && k < cutoff; ++k) {
        s[k] = std::pow(static_cast<double>(k + 1), -decayExponent);
    }
    return s;
}

TTTensor random_tt_decay(const Shape& shape, const RankTuple& ranks, double decayExponent, std::size_t cutoff,
                         const RngStream& rng, std::size_t sweeps)
{
    if (!(decayExponent > 0.0) || !std::isfinite(decayExponent)) {
        throw DomainError("random_tt_decay: decay exponent must be positive");
    }
    if (cutoff == 0 || sweeps == 0) {
        throw DomainError("random_tt_decay: cutoff and sweep count must be >= 1");
    }
    TTTensor t = random_tt(shape, ranks, rng);
    const std::size_t d = shape.order();
    std::vector<DenseTensor> cores = t.cores();

    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t i = 0; i + 1 < d; ++i) {
            const TTTensor current(cores);
            const std::size_t left = current.left_rank(i);
            const std::size_t right = current.right_rank(i + 1);
            const std::size_t rank = current.ranks()[i];
            const Matrix merged = multiply(current.left_unfolding(i), current.right_unfolding(i + 1));
            const SvdResult f = truncated_svd(merged, rank);
            const std::vector<double> target = decay_profile(rank, decayExponent, cutoff);

            RowMajorMatrix u = f.U.view();
            RowMajorMatrix svt = f.Vt.view();
            for (std::size_t k = 0; k < rank; ++k) {
                svt.row(static_cast<Eigen::Index>(k)) *= target[k];
            }
            cores[i] = TTTensor::make_core(i, d, left, shape[i], rank, std::vector<double>(u.data(), u.data() + u.size()));
            cores[i + 1] = TTTensor::make_core(i + 1, d, rank, shape[i + 1], right,
                                               std::vector<double>(svt.data(), svt.data() + svt.size()));
        }
    }
    return TTTensor(std::move(cores), Orthogonality::left);
}

NoisyLowRank noisy_low_rank(const Shape& shape, const RankTuple& exactRanks, double tau, const RngStream& rng)
{
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw DomainError("noisy_low_rank: noise level must be nonnegative");
    }
    const TTTensor raw = random_tt(shape, exactRanks, rng.substream(0));
    const TTTensor exact = tt_scaled(raw, 1.0 / tt_norm(raw));
    DenseTensor x = tt_evaluate(exact);
    if (tau > 0.0) {
        const DenseTensor noise = gaussian_dense(shape, rng.substream(1));
        const double scale = tau / norm(noise);
        std::span<double> v = x.values();
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] += scale * noise[i];
        }
    }
    return {std::move(x), exact};
}

}  // namespace ttsketch
