#include "logitdef/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace logitdef {

std::size_t shape_numel(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw std::runtime_error("tensor: non-positive dimension in shape " + shape_str(shape));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

std::string shape_str(const std::vector<int>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  s += ")";
  return s;
}

Tensor::Tensor(std::vector<int> shape_, std::vector<float> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
  if (shape_numel(shape) != data.size()) {
    throw std::runtime_error("tensor: shape " + shape_str(shape) + " does not match data length " +
                             std::to_string(data.size()));
  }
}

Tensor Tensor::zeros(std::vector<int> shape) {
  std::size_t n = shape_numel(shape);
  return Tensor(std::move(shape), std::vector<float>(n, 0.0f));
}

Tensor Tensor::full(std::vector<int> shape, float value) {
  std::size_t n = shape_numel(shape);
  return Tensor(std::move(shape), std::vector<float>(n, value));
}

Tensor Tensor::vec(std::vector<float> values) {
  int n = static_cast<int>(values.size());
  return Tensor({n}, std::move(values));
}

bool Tensor::all_finite() const {
  for (float v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

int argmax_lowest(const std::vector<float>& v) {
  if (v.empty()) throw std::runtime_error("argmax: empty vector");
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

int argmax_lowest(const Tensor& t) { return argmax_lowest(t.data); }

double linf_dist(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) throw std::runtime_error("linf_dist: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::fabs(static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]));
    if (d > m) m = d;
  }
  return m;
}

double l2_dist(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) throw std::runtime_error("l2_dist: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

double mean_value(const Tensor& t) {
  if (t.size() == 0) throw std::runtime_error("mean_value: empty tensor");
  double s = 0.0;
  for (float v : t.data) s += static_cast<double>(v);
  return s / static_cast<double>(t.size());
}

}  // namespace logitdef
