#include "flaash/oracle.hpp"

#include <stdexcept>
#include <string>

#include "fiber_layout.hpp"

namespace flaash {

namespace {

void check_lengths(const Shape& a, std::size_t mode_a, const Shape& b, std::size_t mode_b) {
  if (mode_a >= a.order() || mode_b >= b.order()) {
    throw std::out_of_range("contraction mode index out of range");
  }
  if (a[mode_a] != b[mode_b]) {
    throw std::invalid_argument("contraction lengths differ: " + std::to_string(a[mode_a]) + " vs " +
                                std::to_string(b[mode_b]));
  }
}

}  // namespace

Shape result_shape(const Shape& a, std::size_t mode_a, const Shape& b, std::size_t mode_b) {
  check_lengths(a, mode_a, b, mode_b);
  return concat_free_modes(a, mode_a, b, mode_b);
}

DenseTensor contract_dense(const DenseTensor& a, const DenseTensor& b, ContractionSpec spec) {
  Shape out_shape = result_shape(a.shape(), spec.mode_a, b.shape(), spec.mode_b);
  const detail::FiberLayout la(a.shape(), spec.mode_a);
  const detail::FiberLayout lb(b.shape(), spec.mode_b);
  DenseTensor out(std::move(out_shape));
  const Index length = la.length();
  Index dest = 0;
  for (Index fa = 0; fa < la.fiber_count(); ++fa) {
    const Index base_a = la.base(fa);
    for (Index fb = 0; fb < lb.fiber_count(); ++fb) {
      const Index base_b = lb.base(fb);
      double acc = 0.0;
      for (Index i = 0; i < length; ++i) {
        acc += a[base_a + i * la.stride()] * b[base_b + i * lb.stride()];
      }
      out[dest++] = acc;
    }
  }
  return out;
}

SparseDotResult sparse_dot_counted(std::span<const Entry> fa, std::span<const Entry> fb) {
  SparseDotResult r;
  std::size_t ia = 0;
  std::size_t ib = 0;
  while (ia < fa.size() && ib < fb.size()) {
    if (fa[ia].index == fb[ib].index) {
      r.value += fa[ia].value * fb[ib].value;
      ++r.collisions;
      ++ia;
      ++ib;
    } else if (fa[ia].index > fb[ib].index) {
      ++ib;
    } else {
      ++ia;
    }
  }
  return r;
}

DenseTensor contract_csf_reference(const CsfTensor& a, const CsfTensor& b) {
  DenseTensor out(result_shape(a.shape(), a.contraction_mode(), b.shape(), b.contraction_mode()));
  Index dest = 0;
  for (Index fa = 0; fa < a.fiber_count(); ++fa) {
    const auto ea = a.fiber(fa);
    for (Index fb = 0; fb < b.fiber_count(); ++fb) {
      const double v = sparse_dot(ea, b.fiber(fb));
      // The region starts at +0.0; zero dot products are never written.
      if (v != 0.0) out[dest] = v;
      ++dest;
    }
  }
  return out;
}

Index total_collisions(const CsfTensor& a, const CsfTensor& b) {
  check_lengths(a.shape(), a.contraction_mode(), b.shape(), b.contraction_mode());
  Index total = 0;
  for (Index fa = 0; fa < a.fiber_count(); ++fa) {
    for (Index fb = 0; fb < b.fiber_count(); ++fb) {
      total += sparse_dot_counted(a.fiber(fa), b.fiber(fb)).collisions;
    }
  }
  return total;
}

}  // namespace flaash
