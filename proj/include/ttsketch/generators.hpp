#pragma once

#include "ttsketch/random.hpp"
#include "ttsketch/tensor.hpp"
#include "ttsketch/tt.hpp"

#include <cstddef>

namespace ttsketch {

/// I.i.d. N(0, 1) entries; entry with linear index i is draw i of `rng`.
[[nodiscard]] DenseTensor gaussian_dense(const Shape& shape, const RngStream& rng);

/// `nnz` N(0, 1) values at independently, uniformly drawn positions. Colliding
/// positions keep the last drawn value, so fewer than `nnz` entries may remain.
[[nodiscard]] SparseTensor gaussian_sparse(const Shape& shape, std::size_t nnz, const RngStream& rng);

/// Train with i.i.d. N(0, 1) core entries; core i is drawn from substream i.
[[nodiscard]] TTTensor random_tt(const Shape& shape, const RankTuple& ranks, const RngStream& rng);

/// Random train whose unfoldings have singular values close to k^(-decayExponent).
///
/// Starting from random_tt, each sweep visits i = 1..d-1, merges W_i ∘ W_{i+1},
/// takes its SVD and replaces the singular values by
/// diag(1, 2^-e, 3^-e, …, cutoff^-e, 0, …) before splitting back into
/// W_i = U and W_{i+1} = S̃·Vᵀ. The final unfolding carries the prescribed
/// values exactly; earlier ones are perturbed by later steps.
[[nodiscard]] TTTensor random_tt_decay(const Shape& shape, const RankTuple& ranks, double decayExponent,
                                       std::size_t cutoff, const RngStream& rng, std::size_t sweeps = 1);

/// The prescribed singular values (1, 2^-e, …) for `count` positions, zero past `cutoff`.
[[nodiscard]] std::vector<double> decay_profile(std::size_t count, double decayExponent, std::size_t cutoff);

struct NoisyLowRank {
    /// x_exact/‖x_exact‖ + τ·n/‖n‖
    DenseTensor tensor;
    /// x_exact/‖x_exact‖ as a train.
    TTTensor exact;
};

/// Low-rank target plus Gaussian noise of relative level `tau`. The train is
/// drawn from substream 0 and the noise from substream 1 of `rng`.
[[nodiscard]] NoisyLowRank noisy_low_rank(const Shape& shape, const RankTuple& exactRanks, double tau,
                                          const RngStream& rng);

}  // namespace ttsketch
