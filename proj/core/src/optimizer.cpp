#include "logitdef/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace logitdef {

OptimizerState make_optimizer(const OptimizerConfig& config,
                              const std::vector<const Tensor*>& params) {
  OptimizerState state;
  state.config = config;
  if (config.algo == OptAlgo::adam) {
    state.m.reserve(params.size());
    state.v.reserve(params.size());
    for (const Tensor* p : params) {
      state.m.push_back(Tensor::zeros(p->shape));
      state.v.push_back(Tensor::zeros(p->shape));
    }
  }
  return state;
}

void optimizer_step(OptimizerState& state, const std::vector<Tensor*>& params,
                    const std::vector<const Tensor*>& grads) {
  if (params.size() != grads.size()) throw std::runtime_error("optimizer_step: param/grad count mismatch");
  const OptimizerConfig& c = state.config;
  state.step_count += 1;
  double lr = c.learning_rate;
  double bc1 = 1.0 - std::pow(static_cast<double>(c.beta1), static_cast<double>(state.step_count));
  double bc2 = 1.0 - std::pow(static_cast<double>(c.beta2), static_cast<double>(state.step_count));

  for (std::size_t t = 0; t < params.size(); ++t) {
    Tensor& p = *params[t];
    const Tensor& g = *grads[t];
    if (!p.same_shape(g)) {
      throw std::runtime_error("optimizer_step: gradient shape " + shape_str(g.shape) +
                               " does not match parameter shape " + shape_str(p.shape));
    }
    if (c.algo == OptAlgo::sgd) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        double grad = static_cast<double>(g.data[i]) +
                      static_cast<double>(c.weight_decay) * static_cast<double>(p.data[i]);
        p.data[i] = static_cast<float>(static_cast<double>(p.data[i]) - lr * grad);
      }
    } else {
      Tensor& m = state.m[t];
      Tensor& v = state.v[t];
      for (std::size_t i = 0; i < p.size(); ++i) {
        double grad = static_cast<double>(g.data[i]) +
                      static_cast<double>(c.weight_decay) * static_cast<double>(p.data[i]);
        double mi = static_cast<double>(c.beta1) * m.data[i] + (1.0 - c.beta1) * grad;
        double vi = static_cast<double>(c.beta2) * v.data[i] + (1.0 - c.beta2) * grad * grad;
        m.data[i] = static_cast<float>(mi);
        v.data[i] = static_cast<float>(vi);
        double mhat = mi / bc1;
        double vhat = vi / bc2;
        p.data[i] =
            static_cast<float>(static_cast<double>(p.data[i]) - lr * mhat / (std::sqrt(vhat) + c.eps));
      }
    }
  }
}

}  // namespace logitdef
