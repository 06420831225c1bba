#include "logitdef/classifier.hpp"

#include <stdexcept>

#include "internal/train_loop.hpp"
#include "logitdef/parallel.hpp"

namespace logitdef {

ArchId arch_from_string(const std::string& name) {
  if (name == "mlp-2h") return ArchId::mlp_2h;
  if (name == "cnn-small") return ArchId::cnn_small;
  throw std::runtime_error("unknown architecture '" + name + "' (expected mlp-2h or cnn-small)");
}

const char* arch_name(ArchId arch) {
  return arch == ArchId::mlp_2h ? "mlp-2h" : "cnn-small";
}

void validate_dataset(const Dataset& dataset, int class_count) {
  if (dataset.empty()) throw std::runtime_error("dataset: empty");
  const std::vector<int>& shape = dataset.front().image.shape;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const LabeledExample& ex = dataset[i];
    if (ex.image.shape != shape) {
      throw std::runtime_error("dataset: example " + std::to_string(i) + " has shape " +
                               shape_str(ex.image.shape) + ", expected " + shape_str(shape));
    }
    if (ex.label < 0 || (class_count > 0 && ex.label >= class_count)) {
      throw std::runtime_error("dataset: example " + std::to_string(i) + " has label " +
                               std::to_string(ex.label) + " outside [0," +
                               std::to_string(class_count) + ")");
    }
    for (float v : ex.image.data) {
      if (!(v >= 0.0f && v <= 1.0f)) {
        throw std::runtime_error("dataset: example " + std::to_string(i) +
                                 " has pixel outside [0,1]");
      }
    }
  }
}

Network build_classifier(const ClassifierSpec& spec) {
  Network net;
  net.input_shape = spec.input_shape;
  net.class_count = spec.class_count;
  net.seed = spec.seed;
  int in_numel = static_cast<int>(shape_numel(spec.input_shape));
  if (spec.arch == ArchId::mlp_2h) {
    net.layers.push_back(Layer::dense(256, in_numel));
    net.layers.push_back(Layer::relu());
    net.layers.push_back(Layer::dense(128, 256));
    net.layers.push_back(Layer::relu());
    net.layers.push_back(Layer::dense(spec.class_count, 128));
  } else {
    if (spec.input_shape.size() != 3) {
      throw std::runtime_error("cnn-small needs an (H,W,C) input shape, got " +
                               shape_str(spec.input_shape));
    }
    int h = spec.input_shape[0], w = spec.input_shape[1], c = spec.input_shape[2];
    if (h % 4 != 0 || w % 4 != 0) {
      throw std::runtime_error("cnn-small needs H and W divisible by 4, got " +
                               shape_str(spec.input_shape));
    }
    net.layers.push_back(Layer::conv2d(16, c, 3));
    net.layers.push_back(Layer::relu());
    net.layers.push_back(Layer::maxpool2x2());
    net.layers.push_back(Layer::conv2d(32, 16, 3));
    net.layers.push_back(Layer::relu());
    net.layers.push_back(Layer::maxpool2x2());
    net.layers.push_back(Layer::dense(128, (h / 4) * (w / 4) * 32));
    net.layers.push_back(Layer::relu());
    net.layers.push_back(Layer::dense(spec.class_count, 128));
  }
  init_parameters(net);
  return net;
}

Network train_classifier(const Dataset& trainset, const ClassifierSpec& spec, TrainLog* log) {
  validate_dataset(trainset, spec.class_count);
  Network net = build_classifier(spec);
  if (spec.epochs == 0) return net;

  detail::TrainLoopSpec loop;
  loop.epochs = spec.epochs;
  loop.batch_size = spec.batch_size;
  loop.optimizer = spec.optimizer;
  loop.seed = spec.seed;
  loop.threads = spec.threads;

  TrainLog result = detail::train_minibatch(
      net, trainset.size(),
      [&](int, std::size_t idx) { return std::make_pair(&trainset[idx].image, trainset[idx].label); },
      loop);
  if (log) *log = std::move(result);
  return net;
}

Tensor predict_logits(const Network& net, const Tensor& image) {
  return forward_eval(net, image).logits();
}

int predict_class(const Network& net, const Tensor& image) {
  return argmax_lowest(predict_logits(net, image));
}

AccuracyReport evaluate_accuracy(const Network& net, const Dataset& dataset, int threads) {
  if (dataset.empty()) throw std::runtime_error("evaluate_accuracy: empty dataset");
  std::vector<char> correct(dataset.size(), 0);
  parallel_for(dataset.size(), threads, [&](std::size_t i) {
    correct[i] = predict_class(net, dataset[i].image) == dataset[i].label ? 1 : 0;
  });
  AccuracyReport report;
  report.total = static_cast<long long>(dataset.size());
  for (char c : correct) report.correct += c;
  return report;
}

Dataset select_correct_subset(const Network& net, const Dataset& dataset, int n_per_class,
                              SelectionManifest* manifest, int threads) {
  if (dataset.empty()) throw std::runtime_error("select_correct_subset: empty dataset");
  if (n_per_class <= 0) throw std::runtime_error("select_correct_subset: n_per_class must be positive");

  std::vector<char> correct(dataset.size(), 0);
  parallel_for(dataset.size(), threads, [&](std::size_t i) {
    correct[i] = predict_class(net, dataset[i].image) == dataset[i].label ? 1 : 0;
  });

  int classes = net.class_count;
  std::vector<int> taken(static_cast<std::size_t>(classes), 0);
  Dataset subset;
  SelectionManifest local;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    int y = dataset[i].label;
    if (!correct[i] || y >= classes || taken[y] >= n_per_class) continue;
    taken[y] += 1;
    subset.push_back(dataset[i]);
    local.chosen_indices.push_back(i);
  }
  for (int c = 0; c < classes; ++c) {
    if (taken[c] == 0) local.missing_classes.push_back(c);
  }
  local.per_class_counts = taken;
  if (manifest) *manifest = std::move(local);
  return subset;
}

}  // namespace logitdef
