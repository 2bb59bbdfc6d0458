#pragma once

#include "ttsketch/tensor.hpp"
#include "ttsketch/tt.hpp"

#include <filesystem>
#include <iosfwd>
#include <variant>

namespace ttsketch {

/// Text formats, indices 1-based in files:
///
///   dense d n_1 … n_d            then ∏n_i values, last index fastest
///   sparse d n_1 … n_d N         then N lines "i_1 … i_d value"
///   tt d n_1 … n_d r_1 … r_{d-1} then each core's values, one block per core
///
/// Values are written with 17 significant digits so a round trip is exact.

using TensorFile = std::variant<DenseTensor, SparseTensor, TTTensor>;

void write_dense(std::ostream& out, const DenseTensor& x);
void write_sparse(std::ostream& out, const SparseTensor& x);
void write_tt(std::ostream& out, const TTTensor& t);

/// Reads any of the three formats, dispatching on the leading keyword.
[[nodiscard]] TensorFile read_tensor(std::istream& in);
[[nodiscard]] TensorFile read_tensor_file(const std::filesystem::path& path);

void write_tensor_file(const std::filesystem::path& path, const TensorFile& value);

}  // namespace ttsketch
