#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "logitdef/rng.hpp"
#include "logitdef/tensor.hpp"

namespace logitdef {

enum class LayerKind { dense, relu, conv2d, maxpool2x2, dropout };

const char* layer_kind_name(LayerKind kind);

struct Layer {
  LayerKind kind = LayerKind::relu;
  Tensor weight;          // dense: (out, in); conv2d: (out_ch, in_ch, k, k)
  Tensor bias;            // dense: (out); conv2d: (out_ch)
  float keep_prob = 1.0f; // dropout only, in (0, 1]

  static Layer dense(int out, int in);
  static Layer relu();
  // Square odd kernel, stride 1, same padding.
  static Layer conv2d(int out_ch, int in_ch, int k);
  // Fixed 2x2 window, stride 2; input height/width must be even.
  static Layer maxpool2x2();
  static Layer dropout(float keep_prob);

  bool has_params() const { return kind == LayerKind::dense || kind == LayerKind::conv2d; }
};

struct Network {
  std::vector<Layer> layers;
  std::vector<int> input_shape;
  int class_count = 0;
  std::uint64_t seed = 0;

  std::string arch_string() const;
  std::size_t param_count() const;
};

// Kaiming-uniform weights, zero biases, streams derived from net.seed.
void init_parameters(Network& net);

std::uint64_t network_signature(const Network& net);

// Output shape of one layer, with structured shape errors naming the layer.
std::vector<int> layer_output_shape(const Layer& layer, const std::vector<int>& in_shape,
                                    int layer_index);

enum class Mode { train, eval };

// Everything backward() needs from the matching forward() call: the
// activation at every layer boundary plus per-layer dropout masks and
// maxpool winner indices.
struct ForwardTrace {
  std::vector<Tensor> activations;  // [0] = input, [i + 1] = output of layer i
  std::vector<Tensor> dropout_masks;          // per layer; values 0 or 1/keep
  std::vector<std::vector<int>> pool_index;   // per layer; winner flat index per output
  std::uint64_t net_signature = 0;

  const Tensor& logits() const { return activations.back(); }
};

ForwardTrace forward(const Network& net, const Tensor& input, Mode mode, RngStream& rng);
// Eval mode needs no randomness (dropout is identity under inverted scaling).
ForwardTrace forward_eval(const Network& net, const Tensor& input);

Tensor softmax(const Tensor& logits);
// (loss, d loss / d logits) with max-subtraction for stability.
std::pair<double, Tensor> softmax_cross_entropy(const Tensor& logits, int label);

struct LayerGrads {
  Tensor weight;
  Tensor bias;
};

struct Gradients {
  std::vector<LayerGrads> layers;
  Tensor input;
};

// Exact reverse-mode gradients of a scalar loss whose gradient w.r.t. the
// logits is loss_grad. The trace must come from a forward() on the same net.
Gradients backward(const Network& net, const ForwardTrace& trace, const Tensor& loss_grad);
// Same walk, parameter gradients skipped; attacks only need d loss / d input.
Tensor backward_input(const Network& net, const ForwardTrace& trace, const Tensor& loss_grad);

// Parameter tensors in layer order (weights before biases within a layer).
std::vector<Tensor*> parameters(Network& net);
std::vector<const Tensor*> parameters(const Network& net);
std::vector<Tensor*> gradient_tensors(Gradients& grads, const Network& net);
Gradients zero_gradients(const Network& net, const std::vector<int>& input_shape);
void accumulate_gradients(Gradients& into, const Gradients& g);

}  // namespace logitdef
