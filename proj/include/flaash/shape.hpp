#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flaash {

/// Positions, lengths, offsets and counts are all 64-bit unsigned.
using Index = std::uint64_t;

/// Raised by loaders when an input document is malformed.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the cycle model observes an impossible event (a grant nobody
/// asked for, a duplicate result write, a deadlock).
class SimulationFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Mode lengths of a tensor. Every length is >= 1 and the order is >= 1, so a
/// Shape always has a well-defined, overflow-checked volume.
class Shape {
 public:
  explicit Shape(std::vector<Index> lengths);
  Shape(std::initializer_list<Index> lengths);

  std::size_t order() const { return lengths_.size(); }
  Index operator[](std::size_t mode) const { return lengths_[mode]; }
  std::span<const Index> lengths() const { return lengths_; }
  Index volume() const { return volume_; }

  /// Row-major strides (last mode fastest).
  std::vector<Index> strides() const;

  Index flatten(std::span<const Index> coord) const;
  std::vector<Index> unflatten(Index flat) const;

  /// The shape with `mode` removed. Removing the only mode leaves [1].
  Shape without_mode(std::size_t mode) const;

  /// "7x7x512"
  std::string to_string() const;

  friend bool operator==(const Shape& lhs, const Shape& rhs) { return lhs.lengths_ == rhs.lengths_; }

 private:
  std::vector<Index> lengths_;
  Index volume_ = 1;
};

/// Concatenates the free modes of two shapes; an empty concatenation is [1].
Shape concat_free_modes(const Shape& a, std::size_t mode_a, const Shape& b, std::size_t mode_b);

/// Parses "7,7,512" (or "7x7x512").
Shape parse_shape(const std::string& text);

/// a * b, throwing std::overflow_error on wraparound.
Index checked_mul(Index a, Index b);

}  // namespace flaash
