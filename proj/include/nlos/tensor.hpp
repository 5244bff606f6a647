#pragma once

#include <numeric>
#include <vector>

#include "nlos/errors.hpp"

namespace nlos::nn {

// Dense row-major tensor, double precision. Shapes are [C,H,W] for images and
// [N] for vectors; batching is handled by callers.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> v;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
    v.assign(static_cast<std::size_t>(numel_of(shape)), 0.0);
  }
  Tensor(std::vector<int> s, std::vector<double> values)
      : shape(std::move(s)), v(std::move(values)) {
    require(v.size() == static_cast<std::size_t>(numel_of(shape)),
            "Tensor: value count does not match shape");
  }

  static long long numel_of(const std::vector<int>& s) {
    long long n = 1;
    for (int d : s) {
      require(d >= 1, "Tensor: non-positive extent");
      n *= d;
    }
    return n;
  }

  std::size_t numel() const { return v.size(); }
  int dim(std::size_t i) const { return shape.at(i); }
  bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

}  // namespace nlos::nn
