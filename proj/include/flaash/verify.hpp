#pragma once

#include <optional>
#include <vector>

#include "flaash/engine.hpp"

namespace flaash {

struct Mismatch {
  std::vector<Index> coord;
  double expected = 0.0;
  double actual = 0.0;
};

/// |x - y| <= rel_tol * max(|x|, |y|); two zeros always agree.
bool within_relative(double x, double y, double rel_tol);

/// First position (row-major) whose bits differ. Shapes must match.
std::optional<Mismatch> first_bit_mismatch(const DenseTensor& expected, const DenseTensor& actual);

std::optional<Mismatch> first_relative_mismatch(const DenseTensor& expected, const DenseTensor& actual,
                                                double rel_tol);

inline constexpr double kDenseRelTol = 1e-12;

struct VerifyReport {
  SimStats stats;
  std::optional<Mismatch> vs_reference;  // bit-exact check
  std::optional<Mismatch> vs_dense;      // kDenseRelTol check

  bool passed() const { return !vs_reference && !vs_dense; }
};

/// Simulates, then checks the exported region against the CSF reference
/// (bit-exact) and the dense brute-force contraction (relative tolerance).
VerifyReport verify_contraction(const CsfTensor& a, const CsfTensor& b, const EngineConfig& cfg);

}  // namespace flaash
