#include "flaash/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

#include "fiber_layout.hpp"

namespace flaash {

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)), values_(shape_.volume(), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != shape_.volume()) {
    throw std::invalid_argument("dense value count " + std::to_string(values_.size()) +
                                " does not match shape volume " + std::to_string(shape_.volume()));
  }
}

Index DenseTensor::count_nonzeros() const {
  return static_cast<Index>(std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

bool bit_equal(const DenseTensor& lhs, const DenseTensor& rhs) {
  if (!(lhs.shape() == rhs.shape())) return false;
  auto a = lhs.values();
  auto b = rhs.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

DenseTensor scaled(const DenseTensor& t, double alpha) {
  DenseTensor out = t;
  for (double& v : out.values()) v *= alpha;
  return out;
}

CsfTensor::CsfTensor(Shape shape, std::size_t contraction_mode, std::vector<Index> fiber_offsets,
                     std::vector<Entry> entries)
    : shape_(std::move(shape)),
      contraction_mode_(contraction_mode),
      fiber_offsets_(std::move(fiber_offsets)),
      entries_(std::move(entries)) {
  if (contraction_mode_ >= shape_.order()) {
    throw std::invalid_argument("contraction mode out of range");
  }
  const Index fibers = shape_.without_mode(contraction_mode_).volume();
  if (fiber_offsets_.size() != fibers + 1) {
    throw std::invalid_argument("fiber offset count must be fiber_count + 1");
  }
  if (fiber_offsets_.front() != 0 || fiber_offsets_.back() != entries_.size()) {
    throw std::invalid_argument("fiber offsets must start at 0 and end at NNZ");
  }
  const Index length = shape_[contraction_mode_];
  for (Index f = 0; f < fibers; ++f) {
    if (fiber_offsets_[f] > fiber_offsets_[f + 1]) {
      throw std::invalid_argument("fiber offsets must be non-decreasing");
    }
    for (Index e = fiber_offsets_[f]; e < fiber_offsets_[f + 1]; ++e) {
      const Entry& entry = entries_[e];
      if (entry.value == 0.0) throw std::invalid_argument("stored entry has value zero");
      if (entry.index >= length) throw std::invalid_argument("entry index out of range");
      if (e > fiber_offsets_[f] && entries_[e - 1].index >= entry.index) {
        throw std::invalid_argument("entry indices must strictly increase within a fiber");
      }
    }
  }
}

EntryRange CsfTensor::fiber_range(Index fiber) const {
  if (fiber >= fiber_count()) {
    throw std::out_of_range("fiber index " + std::to_string(fiber) + " out of range");
  }
  return {fiber_offsets_[fiber], fiber_offsets_[fiber + 1]};
}

std::span<const Entry> CsfTensor::fiber(Index fiber) const {
  const EntryRange r = fiber_range(fiber);
  return std::span<const Entry>(entries_).subspan(r.begin, r.size());
}

std::vector<Index> CsfTensor::coordinate(Index fiber, Index index) const {
  const detail::FiberLayout layout(shape_, contraction_mode_);
  return shape_.unflatten(layout.flat(fiber, index));
}

CsfTensor dense_to_csf(const DenseTensor& t, std::size_t contraction_mode) {
  const Shape& shape = t.shape();
  if (contraction_mode >= shape.order()) {
    throw std::out_of_range("contraction mode out of range");
  }
  const detail::FiberLayout layout(shape, contraction_mode);
  std::vector<Index> offsets;
  offsets.reserve(layout.fiber_count() + 1);
  offsets.push_back(0);
  std::vector<Entry> entries;
  for (Index f = 0; f < layout.fiber_count(); ++f) {
    const Index base = layout.base(f);
    for (Index i = 0; i < layout.length(); ++i) {
      const double v = t[base + i * layout.stride()];
      if (v != 0.0) entries.push_back({i, v});
    }
    offsets.push_back(entries.size());
  }
  return CsfTensor(shape, contraction_mode, std::move(offsets), std::move(entries));
}

DenseTensor csf_to_dense(const CsfTensor& t) {
  DenseTensor out(t.shape());
  const detail::FiberLayout layout(t.shape(), t.contraction_mode());
  for (Index f = 0; f < t.fiber_count(); ++f) {
    const Index base = layout.base(f);
    for (const Entry& e : t.fiber(f)) {
      out[base + e.index * layout.stride()] = e.value;
    }
  }
  return out;
}

std::span<const Entry> fiber_slice(const CsfTensor& t, Index fiber) { return t.fiber(fiber); }

CsfTensor sparsify_result(const DenseTensor& dense, std::size_t contraction_mode) {
  return dense_to_csf(dense, contraction_mode);
}

CsfTensor csf_from_coordinates(const Shape& shape, std::size_t contraction_mode,
                               std::span<const CoordinateEntry> entries) {
  if (contraction_mode >= shape.order()) {
    throw std::invalid_argument("contraction mode out of range");
  }
  const detail::FiberLayout layout(shape, contraction_mode);
  struct Keyed {
    Index fiber;
    Index index;
    double value;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(entries.size());
  for (const CoordinateEntry& ce : entries) {
    if (ce.value == 0.0) throw std::invalid_argument("zero value in coordinate list");
    if (ce.coord.size() != shape.order()) throw std::invalid_argument("coordinate arity mismatch");
    for (std::size_t m = 0; m < ce.coord.size(); ++m) {
      if (ce.coord[m] >= shape[m]) throw std::invalid_argument("coordinate out of range");
    }
    keyed.push_back({layout.fiber_of(ce.coord), ce.coord[contraction_mode], ce.value});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& l, const Keyed& r) {
    return l.fiber != r.fiber ? l.fiber < r.fiber : l.index < r.index;
  });
  std::vector<Index> offsets(layout.fiber_count() + 1, 0);
  std::vector<Entry> out;
  out.reserve(keyed.size());
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    if (k > 0 && keyed[k].fiber == keyed[k - 1].fiber && keyed[k].index == keyed[k - 1].index) {
      throw std::invalid_argument("duplicate coordinate");
    }
    out.push_back({keyed[k].index, keyed[k].value});
    ++offsets[keyed[k].fiber + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return CsfTensor(shape, contraction_mode, std::move(offsets), std::move(out));
}

std::vector<CoordinateEntry> to_coordinates(const CsfTensor& t) {
  const detail::FiberLayout layout(t.shape(), t.contraction_mode());
  std::vector<std::pair<Index, double>> flat;
  flat.reserve(t.nnz());
  for (Index f = 0; f < t.fiber_count(); ++f) {
    for (const Entry& e : t.fiber(f)) flat.emplace_back(layout.flat(f, e.index), e.value);
  }
  std::sort(flat.begin(), flat.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  std::vector<CoordinateEntry> out;
  out.reserve(flat.size());
  for (const auto& [pos, value] : flat) out.push_back({t.shape().unflatten(pos), value});
  return out;
}

CsfTensor with_contraction_mode(const CsfTensor& t, std::size_t contraction_mode) {
  if (contraction_mode == t.contraction_mode()) return t;
  const auto coords = to_coordinates(t);
  return csf_from_coordinates(t.shape(), contraction_mode, coords);
}

}  // namespace flaash
