#pragma once

#include <cstdint>
#include <random>

#include "flaash/tensor.hpp"

namespace flaash {

struct DensityConfig {
  double density = 0.1;  // probability an element is nonzero, in (0, 1]
  std::uint64_t seed = 0;
};

/// Portable draws on top of std::mt19937_64, whose output sequence is fixed
/// by the standard. The std distributions are implementation-defined, so the
/// conversions to doubles and bounded integers live here instead.
class TensorRng {
 public:
  explicit TensorRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [-1, 1] with exact zero excluded (zero draws are redrawn).
  double nonzero_value();

 private:
  std::mt19937_64 engine_;
};

/// Generator algorithm, fixed so that (shape, density, seed) reproduces the
/// same tensor everywhere: walk the elements in row-major order; for each one
/// draw u = unit(); the element is nonzero iff u < density, in which case its
/// value is nonzero_value() (2*unit() - 1, redrawn while it equals 0.0).
DenseTensor random_tensor(const Shape& shape, DensityConfig cfg);

/// Exactly `nnz` nonzeros at uniformly chosen positions (selection sampling
/// over the row-major order: element k of V is picked with probability
/// remaining_needed / remaining_elements), values as in random_tensor.
DenseTensor random_tensor_with_nnz(const Shape& shape, Index nnz, std::uint64_t seed);

}  // namespace flaash
