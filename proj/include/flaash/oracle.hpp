#pragma once

#include <cstddef>
#include <span>

#include "flaash/tensor.hpp"

namespace flaash {

/// Which mode of each operand is contracted. The two modes must have equal
/// length.
struct ContractionSpec {
  std::size_t mode_a = 0;
  std::size_t mode_b = 0;
};

/// A's shape followed by B's shape, both contraction modes removed. A result
/// of order zero is represented as shape [1].
Shape result_shape(const Shape& a, std::size_t mode_a, const Shape& b, std::size_t mode_b);

/// Brute-force contraction over every position of the contraction mode:
/// C[{a}{b}] = sum_i A[{a},i] * B[{b},i], summed in increasing i.
DenseTensor contract_dense(const DenseTensor& a, const DenseTensor& b, ContractionSpec spec);

struct SparseDotResult {
  double value = 0.0;
  Index collisions = 0;
};

/// Two-pointer intersection of two fibers, accumulating products at matching
/// indices in increasing index order.
SparseDotResult sparse_dot_counted(std::span<const Entry> fa, std::span<const Entry> fb);

inline double sparse_dot(std::span<const Entry> fa, std::span<const Entry> fb) {
  return sparse_dot_counted(fa, fb).value;
}

/// Every fiber of A dotted with every fiber of B, laid out row-major over A's
/// free modes then B's. Bit-identical to the simulator's exported region.
DenseTensor contract_csf_reference(const CsfTensor& a, const CsfTensor& b);

/// Sum of sparse_dot collisions over all fiber pairs (the expected MAC count).
Index total_collisions(const CsfTensor& a, const CsfTensor& b);

}  // namespace flaash
