#pragma once

#include <cstdint>
#include <vector>

#include "logitdef/tensor.hpp"

namespace logitdef {

enum class OptAlgo { sgd, adam };

struct OptimizerConfig {
  OptAlgo algo = OptAlgo::adam;
  float learning_rate = 1e-3f;
  float weight_decay = 0.0f;
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float eps = 1e-8f;
};

// Moment accumulators shape-match the parameter tensors they serve.
struct OptimizerState {
  OptimizerConfig config;
  long long step_count = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
};

OptimizerState make_optimizer(const OptimizerConfig& config,
                              const std::vector<const Tensor*>& params);

// One update over all parameter tensors. Weight decay is folded into the
// gradient (g += wd * p) before the adam moments are touched.
void optimizer_step(OptimizerState& state, const std::vector<Tensor*>& params,
                    const std::vector<const Tensor*>& grads);

}  // namespace logitdef
