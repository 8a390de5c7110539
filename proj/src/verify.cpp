#include "flaash/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "flaash/oracle.hpp"

namespace flaash {

bool within_relative(double x, double y, double rel_tol) {
  if (x == y) return true;
  return std::fabs(x - y) <= rel_tol * std::max(std::fabs(x), std::fabs(y));
}

namespace {

template <typename Same>
std::optional<Mismatch> first_mismatch(const DenseTensor& expected, const DenseTensor& actual, Same same) {
  if (!(expected.shape() == actual.shape())) {
    throw std::invalid_argument("cannot compare tensors of shape " + expected.shape().to_string() + " and " +
                                actual.shape().to_string());
  }
  for (Index k = 0; k < expected.shape().volume(); ++k) {
    if (!same(expected[k], actual[k])) {
      return Mismatch{expected.shape().unflatten(k), expected[k], actual[k]};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Mismatch> first_bit_mismatch(const DenseTensor& expected, const DenseTensor& actual) {
  return first_mismatch(expected, actual, [](double x, double y) {
    return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
  });
}

std::optional<Mismatch> first_relative_mismatch(const DenseTensor& expected, const DenseTensor& actual,
                                                double rel_tol) {
  return first_mismatch(expected, actual, [rel_tol](double x, double y) { return within_relative(x, y, rel_tol); });
}

VerifyReport verify_contraction(const CsfTensor& a, const CsfTensor& b, const EngineConfig& cfg) {
  SimResult sim = simulate(a, b, cfg);
  VerifyReport report;
  report.vs_reference = first_bit_mismatch(contract_csf_reference(a, b), sim.result);
  const DenseTensor dense = contract_dense(csf_to_dense(a), csf_to_dense(b), {a.contraction_mode(), b.contraction_mode()});
  report.vs_dense = first_relative_mismatch(dense, sim.result, kDenseRelTol);
  report.stats = std::move(sim.stats);
  return report;
}

}  // namespace flaash
