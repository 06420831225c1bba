#include "internal/train_loop.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

#include "logitdef/parallel.hpp"
#include "logitdef/rng.hpp"

namespace logitdef::detail {

namespace {
constexpr std::size_t kChunk = 32;
}

TrainLog train_minibatch(Network& net, std::size_t count, const ExampleProvider& provider,
                         const TrainLoopSpec& spec) {
  if (count == 0) throw std::runtime_error("train: empty dataset");
  if (spec.batch_size <= 0) throw std::runtime_error("train: batch size must be positive");

  auto params = parameters(net);
  std::vector<const Tensor*> cparams(params.begin(), params.end());
  OptimizerState opt = make_optimizer(spec.optimizer, cparams);

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainLog log;
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    RngStream shuffle_rng(derive_seed(spec.seed, kShuffleTag, static_cast<std::uint64_t>(epoch)));
    shuffle_indices(order, shuffle_rng);

    double epoch_loss = 0.0;
    long long epoch_correct = 0;

    for (std::size_t start = 0; start < count; start += static_cast<std::size_t>(spec.batch_size)) {
      std::size_t bs = std::min(static_cast<std::size_t>(spec.batch_size), count - start);
      std::size_t nchunks = (bs + kChunk - 1) / kChunk;

      std::vector<Gradients> partial(nchunks);
      std::vector<double> chunk_loss(nchunks, 0.0);
      std::vector<long long> chunk_correct(nchunks, 0);

      parallel_for(nchunks, spec.threads, [&](std::size_t ci) {
        std::size_t lo = start + ci * kChunk;
        std::size_t hi = std::min(lo + kChunk, start + bs);
        Gradients acc;
        bool have = false;
        for (std::size_t pos = lo; pos < hi; ++pos) {
          std::size_t idx = order[pos];
          auto [input, label] = provider(epoch, idx);
          RngStream mask_rng(
              derive_seed(spec.seed, kDropoutTag, static_cast<std::uint64_t>(epoch), idx));
          ForwardTrace trace = forward(net, *input, Mode::train, mask_rng);
          auto [loss, loss_grad] = softmax_cross_entropy(trace.logits(), label);
          chunk_loss[ci] += loss;
          if (argmax_lowest(trace.logits()) == label) chunk_correct[ci] += 1;
          Gradients g = backward(net, trace, loss_grad);
          if (!have) {
            acc = std::move(g);
            have = true;
          } else {
            accumulate_gradients(acc, g);
          }
        }
        partial[ci] = std::move(acc);
      });

      Gradients total = std::move(partial[0]);
      for (std::size_t ci = 1; ci < nchunks; ++ci) accumulate_gradients(total, partial[ci]);
      float inv = 1.0f / static_cast<float>(bs);
      for (std::size_t li = 0; li < total.layers.size(); ++li) {
        for (float& v : total.layers[li].weight.data) v *= inv;
        for (float& v : total.layers[li].bias.data) v *= inv;
      }
      for (double l : chunk_loss) epoch_loss += l;
      for (long long cc : chunk_correct) epoch_correct += cc;

      auto grad_ptrs = gradient_tensors(total, net);
      std::vector<const Tensor*> cgrads(grad_ptrs.begin(), grad_ptrs.end());
      optimizer_step(opt, params, cgrads);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.loss = epoch_loss / static_cast<double>(count);
    stats.accuracy = static_cast<double>(epoch_correct) / static_cast<double>(count);
    log.epochs.push_back(stats);
  }
  return log;
}

}  // namespace logitdef::detail
