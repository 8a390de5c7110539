#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flaash/shape.hpp"

namespace flaash {

/// Row-major dense tensor of doubles (last mode fastest).
class DenseTensor {
 public:
  /// Zero-filled.
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator[](Index flat) const { return values_[flat]; }
  double& operator[](Index flat) { return values_[flat]; }
  double at(std::span<const Index> coord) const { return values_[shape_.flatten(coord)]; }

  Index count_nonzeros() const;

 private:
  Shape shape_;
  std::vector<double> values_;
};

/// Same shape and every value identical at the bit level.
bool bit_equal(const DenseTensor& lhs, const DenseTensor& rhs);

DenseTensor scaled(const DenseTensor& t, double alpha);

/// One stored nonzero: its position along the contraction-mode fiber.
struct Entry {
  Index index = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Half-open range of entry offsets [begin, end).
struct EntryRange {
  Index begin = 0;
  Index end = 0;

  Index size() const { return end - begin; }
  bool empty() const { return begin == end; }
  friend bool operator==(const EntryRange&, const EntryRange&) = default;
};

/// Compressed-sparse-fiber tensor with one compressed (contraction) mode.
///
/// Fibers run along `contraction_mode` and are enumerated row-major over the
/// remaining free modes, as if the contraction mode had been moved last.
/// Fiber f owns entries [fiber_offsets[f], fiber_offsets[f+1]); inside a
/// fiber, indices strictly increase and no value is zero.
class CsfTensor {
 public:
  /// Validates every structural invariant and throws std::invalid_argument on
  /// the first violation.
  CsfTensor(Shape shape, std::size_t contraction_mode, std::vector<Index> fiber_offsets,
            std::vector<Entry> entries);

  const Shape& shape() const { return shape_; }
  std::size_t contraction_mode() const { return contraction_mode_; }
  Index contraction_length() const { return shape_[contraction_mode_]; }
  Shape free_shape() const { return shape_.without_mode(contraction_mode_); }

  Index fiber_count() const { return fiber_offsets_.size() - 1; }
  Index nnz() const { return entries_.size(); }

  std::span<const Index> fiber_offsets() const { return fiber_offsets_; }
  std::span<const Entry> entries() const { return entries_; }

  EntryRange fiber_range(Index fiber) const;
  std::span<const Entry> fiber(Index fiber) const;

  /// Full coordinate of a stored entry, given its fiber.
  std::vector<Index> coordinate(Index fiber, Index index) const;

 private:
  Shape shape_;
  std::size_t contraction_mode_;
  std::vector<Index> fiber_offsets_;
  std::vector<Entry> entries_;
};

CsfTensor dense_to_csf(const DenseTensor& t, std::size_t contraction_mode);
DenseTensor csf_to_dense(const CsfTensor& t);

/// Entries of one fiber; throws std::out_of_range for a bad fiber index.
std::span<const Entry> fiber_slice(const CsfTensor& t, Index fiber);

/// Driver-side conversion of an exported dense result region to CSF.
CsfTensor sparsify_result(const DenseTensor& dense, std::size_t contraction_mode);

/// A nonzero given by full coordinate, as used by the interchange format.
struct CoordinateEntry {
  std::vector<Index> coord;
  double value = 0.0;
};

/// Builds CSF from arbitrary-order coordinate entries. Throws
/// std::invalid_argument on duplicate or out-of-range coordinates and on zero
/// values.
CsfTensor csf_from_coordinates(const Shape& shape, std::size_t contraction_mode,
                               std::span<const CoordinateEntry> entries);

/// All stored nonzeros, sorted lexicographically by coordinate.
std::vector<CoordinateEntry> to_coordinates(const CsfTensor& t);

/// Same tensor, compressed along a different mode.
CsfTensor with_contraction_mode(const CsfTensor& t, std::size_t contraction_mode);

}  // namespace flaash
