#include "flaash/random.hpp"

#include <stdexcept>

namespace flaash {

double TensorRng::nonzero_value() {
  double v = 0.0;
  do {
    v = 2.0 * unit() - 1.0;
  } while (v == 0.0);
  return v;
}

DenseTensor random_tensor(const Shape& shape, DensityConfig cfg) {
  if (!(cfg.density > 0.0 && cfg.density <= 1.0)) {
    throw std::invalid_argument("density must lie in (0, 1]");
  }
  TensorRng rng(cfg.seed);
  DenseTensor out(shape);
  for (double& v : out.values()) {
    if (rng.unit() < cfg.density) v = rng.nonzero_value();
  }
  return out;
}

DenseTensor random_tensor_with_nnz(const Shape& shape, Index nnz, std::uint64_t seed) {
  const Index volume = shape.volume();
  if (nnz > volume) {
    throw std::invalid_argument("requested NNZ exceeds shape volume");
  }
  TensorRng rng(seed);
  DenseTensor out(shape);
  Index needed = nnz;
  for (Index k = 0; k < volume && needed > 0; ++k) {
    const Index remaining = volume - k;
    if (rng.unit() * static_cast<double>(remaining) < static_cast<double>(needed)) {
      out[k] = rng.nonzero_value();
      --needed;
    }
  }
  return out;
}

}  // namespace flaash
