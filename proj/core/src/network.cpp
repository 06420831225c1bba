#include "logitdef/network.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace logitdef {

namespace {

[[noreturn]] void shape_error(int layer_index, const char* kind, const std::string& expected,
                              const std::vector<int>& actual) {
  throw std::runtime_error("shape mismatch at layer " + std::to_string(layer_index) + " (" + kind +
                           "): expected " + expected + ", got " + shape_str(actual));
}

std::uint64_t fnv1a_str(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::dense: return "dense";
    case LayerKind::relu: return "relu";
    case LayerKind::conv2d: return "conv2d";
    case LayerKind::maxpool2x2: return "maxpool2x2";
    case LayerKind::dropout: return "dropout";
  }
  return "?";
}

Layer Layer::dense(int out, int in) {
  if (out <= 0 || in <= 0) throw std::runtime_error("dense: non-positive width");
  Layer l;
  l.kind = LayerKind::dense;
  l.weight = Tensor::zeros({out, in});
  l.bias = Tensor::zeros({out});
  return l;
}

Layer Layer::relu() {
  Layer l;
  l.kind = LayerKind::relu;
  return l;
}

Layer Layer::conv2d(int out_ch, int in_ch, int k) {
  if (out_ch <= 0 || in_ch <= 0 || k <= 0) throw std::runtime_error("conv2d: non-positive size");
  if (k % 2 == 0) throw std::runtime_error("conv2d: kernel size must be odd, got " + std::to_string(k));
  Layer l;
  l.kind = LayerKind::conv2d;
  l.weight = Tensor::zeros({out_ch, in_ch, k, k});
  l.bias = Tensor::zeros({out_ch});
  return l;
}

Layer Layer::maxpool2x2() {
  Layer l;
  l.kind = LayerKind::maxpool2x2;
  return l;
}

Layer Layer::dropout(float keep_prob) {
  if (!(keep_prob > 0.0f && keep_prob <= 1.0f)) {
    throw std::runtime_error("dropout: keep probability must be in (0,1]");
  }
  Layer l;
  l.kind = LayerKind::dropout;
  l.keep_prob = keep_prob;
  return l;
}

std::string Network::arch_string() const {
  std::string s = "input";
  for (int d : input_shape) s += " " + std::to_string(d);
  for (const Layer& l : layers) {
    s += " | ";
    s += layer_kind_name(l.kind);
    switch (l.kind) {
      case LayerKind::dense:
        s += " " + std::to_string(l.weight.shape[0]) + " " + std::to_string(l.weight.shape[1]);
        break;
      case LayerKind::conv2d:
        s += " " + std::to_string(l.weight.shape[0]) + " " + std::to_string(l.weight.shape[1]) +
             " " + std::to_string(l.weight.shape[2]);
        break;
      case LayerKind::dropout: {
        char buf[32];
        std::snprintf(buf, sizeof(buf), " %.9g", static_cast<double>(l.keep_prob));
        s += buf;
        break;
      }
      default: break;
    }
  }
  s += " | classes " + std::to_string(class_count);
  return s;
}

std::size_t Network::param_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers) {
    if (l.has_params()) n += l.weight.size() + l.bias.size();
  }
  return n;
}

void init_parameters(Network& net) {
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    Layer& l = net.layers[i];
    if (!l.has_params()) continue;
    int fan_in = l.kind == LayerKind::dense
                     ? l.weight.shape[1]
                     : l.weight.shape[1] * l.weight.shape[2] * l.weight.shape[3];
    double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    RngStream rng(derive_seed(net.seed, 0x1a1a, i));
    for (float& w : l.weight.data) w = static_cast<float>(rng.uniform(-bound, bound));
    for (float& b : l.bias.data) b = 0.0f;
  }
}

std::uint64_t network_signature(const Network& net) { return fnv1a_str(net.arch_string()); }

std::vector<int> layer_output_shape(const Layer& layer, const std::vector<int>& in_shape,
                                    int layer_index) {
  switch (layer.kind) {
    case LayerKind::dense: {
      int in = layer.weight.shape[1];
      if (static_cast<int>(shape_numel(in_shape)) != in) {
        shape_error(layer_index, "dense", "input of " + std::to_string(in) + " values", in_shape);
      }
      return {layer.weight.shape[0]};
    }
    case LayerKind::relu:
    case LayerKind::dropout:
      return in_shape;
    case LayerKind::conv2d: {
      if (in_shape.size() != 3 || in_shape[2] != layer.weight.shape[1]) {
        shape_error(layer_index, "conv2d",
                    "(H,W," + std::to_string(layer.weight.shape[1]) + ")", in_shape);
      }
      return {in_shape[0], in_shape[1], layer.weight.shape[0]};
    }
    case LayerKind::maxpool2x2: {
      if (in_shape.size() != 3 || in_shape[0] % 2 != 0 || in_shape[1] % 2 != 0) {
        shape_error(layer_index, "maxpool2x2", "(even H, even W, C)", in_shape);
      }
      return {in_shape[0] / 2, in_shape[1] / 2, in_shape[2]};
    }
  }
  throw std::runtime_error("unknown layer kind");
}

namespace {

void dense_forward(const Layer& l, const Tensor& in, Tensor& out) {
  int n_out = l.weight.shape[0];
  int n_in = l.weight.shape[1];
  const float* w = l.weight.data.data();
  const float* x = in.data.data();
  for (int o = 0; o < n_out; ++o) {
    double acc = static_cast<double>(l.bias.data[o]);
    const float* row = w + static_cast<std::size_t>(o) * n_in;
    for (int i = 0; i < n_in; ++i) acc += static_cast<double>(row[i]) * static_cast<double>(x[i]);
    out.data[o] = static_cast<float>(acc);
  }
}

void conv_forward(const Layer& l, const std::vector<int>& in_shape, const Tensor& in, Tensor& out) {
  int H = in_shape[0], W = in_shape[1], Cin = in_shape[2];
  int Cout = l.weight.shape[0], k = l.weight.shape[2];
  int pad = k / 2;
  const float* x = in.data.data();
  const float* w = l.weight.data.data();
  float* y = out.data.data();
  std::vector<double> acc(static_cast<std::size_t>(Cout));
  for (int oy = 0; oy < H; ++oy) {
    for (int ox = 0; ox < W; ++ox) {
      for (int oc = 0; oc < Cout; ++oc) acc[oc] = static_cast<double>(l.bias.data[oc]);
      for (int ky = 0; ky < k; ++ky) {
        int iy = oy + ky - pad;
        if (iy < 0 || iy >= H) continue;
        for (int kx = 0; kx < k; ++kx) {
          int ix = ox + kx - pad;
          if (ix < 0 || ix >= W) continue;
          const float* xin = x + (static_cast<std::size_t>(iy) * W + ix) * Cin;
          int woff = ky * k + kx;
          for (int oc = 0; oc < Cout; ++oc) {
            const float* wrow = w + (static_cast<std::size_t>(oc) * Cin * k * k) + woff;
            double a = 0.0;
            for (int ic = 0; ic < Cin; ++ic) {
              a += static_cast<double>(xin[ic]) *
                   static_cast<double>(wrow[static_cast<std::size_t>(ic) * k * k]);
            }
            acc[oc] += a;
          }
        }
      }
      float* yo = y + (static_cast<std::size_t>(oy) * W + ox) * Cout;
      for (int oc = 0; oc < Cout; ++oc) yo[oc] = static_cast<float>(acc[oc]);
    }
  }
}

void maxpool_forward(const std::vector<int>& in_shape, const Tensor& in, Tensor& out,
                     std::vector<int>& winners) {
  int H = in_shape[0], W = in_shape[1], C = in_shape[2];
  int Ho = H / 2, Wo = W / 2;
  winners.assign(static_cast<std::size_t>(Ho) * Wo * C, 0);
  const float* x = in.data.data();
  for (int oy = 0; oy < Ho; ++oy) {
    for (int ox = 0; ox < Wo; ++ox) {
      for (int c = 0; c < C; ++c) {
        int best_idx = ((2 * oy) * W + (2 * ox)) * C + c;
        float best = x[best_idx];
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            int idx = ((2 * oy + dy) * W + (2 * ox + dx)) * C + c;
            if (x[idx] > best) {
              best = x[idx];
              best_idx = idx;
            }
          }
        }
        std::size_t o = (static_cast<std::size_t>(oy) * Wo + ox) * C + c;
        out.data[o] = best;
        winners[o] = best_idx;
      }
    }
  }
}

}  // namespace

ForwardTrace forward(const Network& net, const Tensor& input, Mode mode, RngStream& rng) {
  if (net.layers.empty()) throw std::runtime_error("forward: network has no layers");
  if (!net.input_shape.empty() && shape_numel(net.input_shape) != input.size()) {
    shape_error(0, "input", shape_str(net.input_shape), input.shape);
  }
  ForwardTrace trace;
  trace.net_signature = network_signature(net);
  trace.activations.reserve(net.layers.size() + 1);
  trace.activations.push_back(input);
  trace.dropout_masks.resize(net.layers.size());
  trace.pool_index.resize(net.layers.size());

  std::vector<int> shape = input.shape;
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    const Layer& l = net.layers[li];
    std::vector<int> out_shape = layer_output_shape(l, shape, static_cast<int>(li));
    const Tensor& in = trace.activations.back();
    Tensor out = Tensor::zeros(out_shape);
    switch (l.kind) {
      case LayerKind::dense:
        dense_forward(l, in, out);
        break;
      case LayerKind::relu:
        for (std::size_t i = 0; i < in.size(); ++i) out.data[i] = in.data[i] > 0.0f ? in.data[i] : 0.0f;
        break;
      case LayerKind::conv2d:
        conv_forward(l, shape, in, out);
        break;
      case LayerKind::maxpool2x2:
        maxpool_forward(shape, in, out, trace.pool_index[li]);
        break;
      case LayerKind::dropout: {
        if (mode == Mode::eval) {
          out.data = in.data;  // inverted dropout: eval is a plain pass
        } else {
          Tensor mask = Tensor::zeros(out_shape);
          float inv_keep = 1.0f / l.keep_prob;
          for (std::size_t i = 0; i < in.size(); ++i) {
            float m = rng.bernoulli(l.keep_prob) ? inv_keep : 0.0f;
            mask.data[i] = m;
            out.data[i] = in.data[i] * m;
          }
          trace.dropout_masks[li] = std::move(mask);
        }
        break;
      }
    }
    trace.activations.push_back(std::move(out));
    shape = out_shape;
  }

  if (net.class_count > 0 &&
      trace.activations.back().size() != static_cast<std::size_t>(net.class_count)) {
    throw std::runtime_error("forward: final layer produced " +
                             std::to_string(trace.activations.back().size()) +
                             " values, class count is " + std::to_string(net.class_count));
  }
  return trace;
}

ForwardTrace forward_eval(const Network& net, const Tensor& input) {
  RngStream rng(0);
  return forward(net, input, Mode::eval, rng);
}

Tensor softmax(const Tensor& logits) {
  Tensor out = Tensor::zeros(logits.shape);
  double m = logits.data[0];
  for (float v : logits.data) m = std::max(m, static_cast<double>(v));
  double sum = 0.0;
  std::vector<double> e(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    e[i] = std::exp(static_cast<double>(logits.data[i]) - m);
    sum += e[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) out.data[i] = static_cast<float>(e[i] / sum);
  return out;
}

std::pair<double, Tensor> softmax_cross_entropy(const Tensor& logits, int label) {
  int c = static_cast<int>(logits.size());
  if (label < 0 || label >= c) {
    throw std::runtime_error("softmax_cross_entropy: label " + std::to_string(label) +
                             " out of range [0," + std::to_string(c) + ")");
  }
  double m = logits.data[0];
  for (float v : logits.data) m = std::max(m, static_cast<double>(v));
  double sum = 0.0;
  std::vector<double> e(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    e[i] = std::exp(static_cast<double>(logits.data[i]) - m);
    sum += e[i];
  }
  double loss = -(static_cast<double>(logits.data[label]) - m) + std::log(sum);
  Tensor grad = Tensor::zeros(logits.shape);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    double p = e[i] / sum;
    grad.data[i] = static_cast<float>(p - (static_cast<int>(i) == label ? 1.0 : 0.0));
  }
  return {loss, grad};
}

namespace {

void dense_backward(const Layer& l, const Tensor& in, const Tensor& gout, Tensor& gin,
                    LayerGrads* lg) {
  int n_out = l.weight.shape[0];
  int n_in = l.weight.shape[1];
  const float* w = l.weight.data.data();
  const float* g = gout.data.data();
  const float* x = in.data.data();
  if (lg) {
    float* dw = lg->weight.data.data();
    for (int o = 0; o < n_out; ++o) {
      float go = g[o];
      float* drow = dw + static_cast<std::size_t>(o) * n_in;
      for (int i = 0; i < n_in; ++i) drow[i] += go * x[i];
      lg->bias.data[o] += go;
    }
  }
  for (int i = 0; i < n_in; ++i) {
    double acc = 0.0;
    for (int o = 0; o < n_out; ++o) {
      acc += static_cast<double>(w[static_cast<std::size_t>(o) * n_in + i]) *
             static_cast<double>(g[o]);
    }
    gin.data[i] = static_cast<float>(acc);
  }
}

void conv_backward(const Layer& l, const std::vector<int>& in_shape, const Tensor& in,
                   const Tensor& gout, Tensor& gin, LayerGrads* lg) {
  int H = in_shape[0], W = in_shape[1], Cin = in_shape[2];
  int Cout = l.weight.shape[0], k = l.weight.shape[2];
  int pad = k / 2;
  const float* x = in.data.data();
  const float* w = l.weight.data.data();
  const float* g = gout.data.data();
  float* gx = gin.data.data();
  float* dw = lg ? lg->weight.data.data() : nullptr;
  for (int oy = 0; oy < H; ++oy) {
    for (int ox = 0; ox < W; ++ox) {
      const float* go = g + (static_cast<std::size_t>(oy) * W + ox) * Cout;
      if (lg) {
        for (int oc = 0; oc < Cout; ++oc) lg->bias.data[oc] += go[oc];
      }
      for (int ky = 0; ky < k; ++ky) {
        int iy = oy + ky - pad;
        if (iy < 0 || iy >= H) continue;
        for (int kx = 0; kx < k; ++kx) {
          int ix = ox + kx - pad;
          if (ix < 0 || ix >= W) continue;
          std::size_t in_base = (static_cast<std::size_t>(iy) * W + ix) * Cin;
          int woff = ky * k + kx;
          for (int oc = 0; oc < Cout; ++oc) {
            float go_oc = go[oc];
            if (go_oc == 0.0f) continue;
            std::size_t wrow = static_cast<std::size_t>(oc) * Cin * k * k + woff;
            for (int ic = 0; ic < Cin; ++ic) {
              std::size_t wi = wrow + static_cast<std::size_t>(ic) * k * k;
              gx[in_base + ic] += w[wi] * go_oc;
              if (dw) dw[wi] += x[in_base + ic] * go_oc;
            }
          }
        }
      }
    }
  }
}

Gradients backward_impl(const Network& net, const ForwardTrace& trace, const Tensor& loss_grad,
                        bool want_params) {
  if (trace.net_signature != network_signature(net) ||
      trace.activations.size() != net.layers.size() + 1) {
    throw std::runtime_error("backward: activation cache is stale or missing for this network");
  }
  if (loss_grad.size() != trace.activations.back().size()) {
    throw std::runtime_error("backward: loss gradient length " + std::to_string(loss_grad.size()) +
                             " does not match logits length " +
                             std::to_string(trace.activations.back().size()));
  }

  Gradients grads;
  if (want_params) {
    grads.layers.resize(net.layers.size());
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
      if (net.layers[li].has_params()) {
        grads.layers[li].weight = Tensor::zeros(net.layers[li].weight.shape);
        grads.layers[li].bias = Tensor::zeros(net.layers[li].bias.shape);
      }
    }
  }

  Tensor g = loss_grad;
  for (int li = static_cast<int>(net.layers.size()) - 1; li >= 0; --li) {
    const Layer& l = net.layers[li];
    const Tensor& in = trace.activations[li];
    Tensor gin = Tensor::zeros(in.shape);
    switch (l.kind) {
      case LayerKind::dense:
        dense_backward(l, in, g, gin, want_params ? &grads.layers[li] : nullptr);
        break;
      case LayerKind::relu:
        for (std::size_t i = 0; i < in.size(); ++i) {
          gin.data[i] = in.data[i] > 0.0f ? g.data[i] : 0.0f;
        }
        break;
      case LayerKind::conv2d:
        conv_backward(l, in.shape, in, g, gin, want_params ? &grads.layers[li] : nullptr);
        break;
      case LayerKind::maxpool2x2: {
        const std::vector<int>& winners = trace.pool_index[li];
        if (winners.size() != g.size()) {
          throw std::runtime_error("backward: activation cache is stale or missing for this network");
        }
        for (std::size_t o = 0; o < g.size(); ++o) gin.data[winners[o]] += g.data[o];
        break;
      }
      case LayerKind::dropout: {
        const Tensor& mask = trace.dropout_masks[li];
        if (mask.size() == 0) {
          gin.data = g.data;  // eval-mode trace: identity
        } else {
          for (std::size_t i = 0; i < g.size(); ++i) gin.data[i] = g.data[i] * mask.data[i];
        }
        break;
      }
    }
    g = std::move(gin);
  }
  grads.input = std::move(g);
  return grads;
}

}  // namespace

Gradients backward(const Network& net, const ForwardTrace& trace, const Tensor& loss_grad) {
  return backward_impl(net, trace, loss_grad, true);
}

Tensor backward_input(const Network& net, const ForwardTrace& trace, const Tensor& loss_grad) {
  return backward_impl(net, trace, loss_grad, false).input;
}

std::vector<Tensor*> parameters(Network& net) {
  std::vector<Tensor*> out;
  for (Layer& l : net.layers) {
    if (l.has_params()) {
      out.push_back(&l.weight);
      out.push_back(&l.bias);
    }
  }
  return out;
}

std::vector<const Tensor*> parameters(const Network& net) {
  std::vector<const Tensor*> out;
  for (const Layer& l : net.layers) {
    if (l.has_params()) {
      out.push_back(&l.weight);
      out.push_back(&l.bias);
    }
  }
  return out;
}

std::vector<Tensor*> gradient_tensors(Gradients& grads, const Network& net) {
  std::vector<Tensor*> out;
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    if (net.layers[li].has_params()) {
      out.push_back(&grads.layers[li].weight);
      out.push_back(&grads.layers[li].bias);
    }
  }
  return out;
}

Gradients zero_gradients(const Network& net, const std::vector<int>& input_shape) {
  Gradients g;
  g.layers.resize(net.layers.size());
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    if (net.layers[li].has_params()) {
      g.layers[li].weight = Tensor::zeros(net.layers[li].weight.shape);
      g.layers[li].bias = Tensor::zeros(net.layers[li].bias.shape);
    }
  }
  g.input = Tensor::zeros(input_shape);
  return g;
}

void accumulate_gradients(Gradients& into, const Gradients& g) {
  for (std::size_t li = 0; li < into.layers.size(); ++li) {
    for (std::size_t i = 0; i < into.layers[li].weight.size(); ++i) {
      into.layers[li].weight.data[i] += g.layers[li].weight.data[i];
    }
    for (std::size_t i = 0; i < into.layers[li].bias.size(); ++i) {
      into.layers[li].bias.data[i] += g.layers[li].bias.data[i];
    }
  }
}

}  // namespace logitdef
