#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logitdef/dataset.hpp"
#include "logitdef/network.hpp"
#include "logitdef/optimizer.hpp"

namespace logitdef {

enum class ArchId { mlp_2h, cnn_small };

ArchId arch_from_string(const std::string& name);
const char* arch_name(ArchId arch);

struct ClassifierSpec {
  ArchId arch = ArchId::cnn_small;
  std::vector<int> input_shape = {28, 28, 1};
  int class_count = 10;
  int epochs = 5;
  int batch_size = 128;
  OptimizerConfig optimizer{OptAlgo::adam, 1e-3f, 1e-4f};
  std::uint64_t seed = 1;
  int threads = 0;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainLog {
  std::vector<EpochStats> epochs;
};

// Initialized, untrained network for the spec (epochs are ignored here).
Network build_classifier(const ClassifierSpec& spec);

// Mini-batch cross-entropy training; deterministic for a given seed and
// independent of the worker thread count (per-example gradients are reduced
// over fixed-size chunks in a fixed order).
Network train_classifier(const Dataset& trainset, const ClassifierSpec& spec,
                         TrainLog* log = nullptr);

Tensor predict_logits(const Network& net, const Tensor& image);
int predict_class(const Network& net, const Tensor& image);

struct AccuracyReport {
  long long correct = 0;
  long long total = 0;
  double fraction() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

AccuracyReport evaluate_accuracy(const Network& net, const Dataset& dataset, int threads = 0);

struct SelectionManifest {
  std::vector<int> missing_classes;      // classes with zero correct examples
  std::vector<std::size_t> chosen_indices;
  std::vector<int> per_class_counts;
};

// Up to n_per_class correctly classified examples per class, in dataset order.
Dataset select_correct_subset(const Network& net, const Dataset& dataset, int n_per_class,
                              SelectionManifest* manifest = nullptr, int threads = 0);

}  // namespace logitdef
