#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "logitdef/classifier.hpp"
#include "logitdef/network.hpp"
#include "logitdef/optimizer.hpp"

namespace logitdef::detail {

struct TrainLoopSpec {
  int epochs = 1;
  int batch_size = 128;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  int threads = 0;
};

// Input tensor and label for a given (epoch, dataset index). The pointer must
// stay valid for the duration of the batch.
using ExampleProvider = std::function<std::pair<const Tensor*, int>(int epoch, std::size_t index)>;

// Shuffled mini-batch training with mean-gradient steps. Per-example
// gradients are accumulated over fixed 32-example chunks and the chunks are
// reduced in order, so the result is bitwise identical for any thread count.
TrainLog train_minibatch(Network& net, std::size_t count, const ExampleProvider& provider,
                         const TrainLoopSpec& spec);

// Stream tags for seed derivation; shared so tests can reproduce draws.
inline constexpr std::uint64_t kShuffleTag = 0x5351;
inline constexpr std::uint64_t kDropoutTag = 0xd209;
inline constexpr std::uint64_t kPickTag = 0x9ac4;

}  // namespace logitdef::detail
