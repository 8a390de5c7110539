#pragma once

#include <span>
#include <vector>

#include "flaash/shape.hpp"

namespace flaash::detail {

// Maps (fiber, index-along-fiber) to a row-major flat position of the full
// tensor. Fibers are numbered row-major over the free modes.
class FiberLayout {
 public:
  FiberLayout(const Shape& shape, std::size_t mode) : mode_(mode), length_(shape[mode]) {
    const auto full = shape.strides();
    stride_ = full[mode];
    for (std::size_t m = 0; m < shape.order(); ++m) {
      if (m == mode) continue;
      free_lengths_.push_back(shape[m]);
      free_strides_.push_back(full[m]);
    }
    fiber_count_ = 1;
    for (Index len : free_lengths_) fiber_count_ *= len;
  }

  Index fiber_count() const { return fiber_count_; }
  Index length() const { return length_; }
  Index stride() const { return stride_; }

  Index base(Index fiber) const {
    Index base = 0;
    for (std::size_t k = free_lengths_.size(); k-- > 0;) {
      base += (fiber % free_lengths_[k]) * free_strides_[k];
      fiber /= free_lengths_[k];
    }
    return base;
  }

  Index flat(Index fiber, Index index) const { return base(fiber) + index * stride_; }

  Index fiber_of(std::span<const Index> coord) const {
    Index fiber = 0;
    std::size_t k = 0;
    for (std::size_t m = 0; m < coord.size(); ++m) {
      if (m == mode_) continue;
      fiber = fiber * free_lengths_[k++] + coord[m];
    }
    return fiber;
  }

 private:
  std::size_t mode_;
  Index length_;
  Index stride_ = 1;
  Index fiber_count_ = 1;
  std::vector<Index> free_lengths_;
  std::vector<Index> free_strides_;
};

}  // namespace flaash::detail
