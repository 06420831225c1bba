#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace logitdef {

// Shape-tagged, row-major container of 32-bit reals. The universal value type
// for images, logits, activations, gradients and parameters. Reductions over
// the data accumulate in 64-bit.
struct Tensor {
  std::vector<int> shape;
  std::vector<float> data;

  Tensor() = default;
  Tensor(std::vector<int> shape_, std::vector<float> data_);

  static Tensor zeros(std::vector<int> shape);
  static Tensor full(std::vector<int> shape, float value);
  static Tensor vec(std::vector<float> values);

  std::size_t size() const { return data.size(); }
  bool same_shape(const Tensor& other) const { return shape == other.shape; }
  bool all_finite() const;
};

std::size_t shape_numel(const std::vector<int>& shape);
std::string shape_str(const std::vector<int>& shape);

// Argmax with ties resolved to the lowest index; the one tie rule used
// everywhere a prediction is read off a logits vector.
int argmax_lowest(const Tensor& t);
int argmax_lowest(const std::vector<float>& v);

double linf_dist(const Tensor& a, const Tensor& b);
double l2_dist(const Tensor& a, const Tensor& b);
double mean_value(const Tensor& t);

}  // namespace logitdef
