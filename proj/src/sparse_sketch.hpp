#pragma once

#include "ttsketch/random.hpp"
#include "ttsketch/tensor.hpp"
#include "ttsketch/tt.hpp"

namespace ttsketch::detail {

/// Randomized TT-SVD of a nonzero sparse tensor at already clipped sketch ranks.
TTTensor sparse_randomized_tt_svd(const SparseTensor& x, const RankTuple& sketch, const RngStream& rng);

}  // namespace ttsketch::detail
