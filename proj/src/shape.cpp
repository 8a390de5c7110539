#include "flaash/shape.hpp"

#include <limits>
#include <sstream>

namespace flaash {

Index checked_mul(Index a, Index b) {
  if (a != 0 && b > std::numeric_limits<Index>::max() / a) {
    throw std::overflow_error("shape volume overflows 64 bits");
  }
  return a * b;
}

Shape::Shape(std::vector<Index> lengths) : lengths_(std::move(lengths)) {
  if (lengths_.empty()) {
    throw std::invalid_argument("shape must have at least one mode");
  }
  for (Index len : lengths_) {
    if (len == 0) {
      throw std::invalid_argument("mode lengths must be >= 1");
    }
    volume_ = checked_mul(volume_, len);
  }
}

Shape::Shape(std::initializer_list<Index> lengths) : Shape(std::vector<Index>(lengths)) {}

std::vector<Index> Shape::strides() const {
  std::vector<Index> out(lengths_.size(), 1);
  for (std::size_t m = lengths_.size() - 1; m > 0; --m) {
    out[m - 1] = out[m] * lengths_[m];
  }
  return out;
}

Index Shape::flatten(std::span<const Index> coord) const {
  if (coord.size() != lengths_.size()) {
    throw std::invalid_argument("coordinate arity does not match shape order");
  }
  Index flat = 0;
  for (std::size_t m = 0; m < coord.size(); ++m) {
    if (coord[m] >= lengths_[m]) {
      throw std::out_of_range("coordinate out of range");
    }
    flat = flat * lengths_[m] + coord[m];
  }
  return flat;
}

std::vector<Index> Shape::unflatten(Index flat) const {
  if (flat >= volume_) {
    throw std::out_of_range("flat index out of range");
  }
  std::vector<Index> coord(lengths_.size());
  for (std::size_t m = lengths_.size(); m-- > 0;) {
    coord[m] = flat % lengths_[m];
    flat /= lengths_[m];
  }
  return coord;
}

Shape Shape::without_mode(std::size_t mode) const {
  if (mode >= lengths_.size()) {
    throw std::out_of_range("mode index out of range");
  }
  std::vector<Index> rest;
  rest.reserve(lengths_.size());
  for (std::size_t m = 0; m < lengths_.size(); ++m) {
    if (m != mode) rest.push_back(lengths_[m]);
  }
  if (rest.empty()) rest.push_back(1);
  return Shape(std::move(rest));
}

std::string Shape::to_string() const {
  std::ostringstream os;
  for (std::size_t m = 0; m < lengths_.size(); ++m) {
    if (m) os << 'x';
    os << lengths_[m];
  }
  return os.str();
}

Shape concat_free_modes(const Shape& a, std::size_t mode_a, const Shape& b, std::size_t mode_b) {
  if (mode_a >= a.order() || mode_b >= b.order()) {
    throw std::out_of_range("contraction mode index out of range");
  }
  std::vector<Index> out;
  for (std::size_t m = 0; m < a.order(); ++m) {
    if (m != mode_a) out.push_back(a[m]);
  }
  for (std::size_t m = 0; m < b.order(); ++m) {
    if (m != mode_b) out.push_back(b[m]);
  }
  if (out.empty()) out.push_back(1);
  return Shape(std::move(out));
}

Shape parse_shape(const std::string& text) {
  std::vector<Index> lengths;
  std::string token;
  auto flush = [&] {
    if (token.empty()) throw std::invalid_argument("empty mode length in shape '" + text + "'");
    if (token.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad mode length '" + token + "'");
    }
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(token, &used);
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("mode length '" + token + "' is too large");
    }
    lengths.push_back(v);
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == 'x') {
      flush();
    } else if (c != ' ') {
      token.push_back(c);
    }
  }
  flush();
  return Shape(std::move(lengths));
}

}  // namespace flaash
