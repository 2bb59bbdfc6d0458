#pragma once

#include "ttsketch/random.hpp"
#include "ttsketch/tensor.hpp"
#include "ttsketch/tt.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ttsketch {

struct AlsConfig {
    RankTuple ranks;
    std::uint64_t seed = 0;
    /// Number of left-to-right half-sweeps.
    std::size_t sweeps = 1;
};

struct AlsResult {
    TTTensor tt;
    /// ‖f − x‖² after every core update, in update order.
    std::vector<double> objective;
};

/// Called after each core update with the update index and the current train,
/// whose active core is the freshly solved one (not yet orthogonalized).
using AlsObserver = std::function<void(std::size_t step, const TTTensor& current)>;

/// Alternating least squares for min ‖f − x‖² over trains of the given ranks.
///
/// Cores 2..d start from GaussianField(rng.substream(i)) (1-based i), entry
/// (a, μ, b) = value(a, prefix_hash({μ, b})), and are right-orthogonalized.
/// Each update sets core i to the projection of f onto the orthonormal
/// environment, then QR-orthogonalizes it and moves right. The result is
/// left-orthogonal. Throws UndefinedError for f = 0 and RankError when a rank
/// exceeds what its neighbours can carry (r_i > r_{i-1}·n_i or r_{i-1} > n_i·r_i).
[[nodiscard]] AlsResult als_half_sweep(const DenseTensor& f, const RankTuple& ranks, const RngStream& rng,
                                       std::size_t sweeps = 1, const AlsObserver& observer = {});

/// Same, seeded with RngStream(cfg.seed).
[[nodiscard]] AlsResult als_half_sweep(const DenseTensor& f, const AlsConfig& cfg, const AlsObserver& observer = {});

}  // namespace ttsketch
