#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "shotscore/adam.hpp"
#include "shotscore/network.hpp"
#include "shotscore/tensor.hpp"

namespace shotscore {

// One preprocessed training frame with its shot-importance target.
template <typename T>
struct TrainSample {
  Tensor<T> frame;  // input_side x input_side x channels, values in [0,1]
  T target;         // in [0, L]
};

struct TrainConfig {
  int epochs = 1;
  int batch_size = 16;
  bool augment = true;
  // Stop after the first iteration whose mean batch loss drops below this;
  // 0 disables early stopping (run all epochs).
  double stop_loss = 0.0;
  // Invoke the checkpoint callback every this many iterations; 0 disables
  // periodic checkpoints (the caller still writes one at the end).
  long long checkpoint_every = 0;
  AdamConfig adam{};
};

struct TrainLogEntry {
  long long iteration;  // 1-based, global across epochs
  int epoch;            // 1-based
  double batch_loss;    // sum-of-squares loss divided by the batch size
};

struct TrainRun {
  std::uint64_t seed = 0;
  int epochs = 0;
  long long checkpoint_every = 0;
  std::vector<TrainLogEntry> log;
  bool stopped_early = false;
};

// Mini-batch loop: per epoch the sample order is reshuffled from rng, each
// sample is augmented with a freshly drawn code (1..8), and each batch does
// forward/backward over its samples (gradients summed) followed by a single
// optimizer step. Aborts with a numeric error if the batch loss goes
// non-finite. Deterministic given the rng seed.
template <typename T>
TrainRun train(
    Network<T>& net, const std::vector<TrainSample<T>>& samples,
    const TrainConfig& config, Rng& rng,
    const std::function<void(Network<T>&, long long)>& on_checkpoint = {});

extern template TrainRun train(
    Network<float>&, const std::vector<TrainSample<float>>&,
    const TrainConfig&, Rng&,
    const std::function<void(Network<float>&, long long)>&);
extern template TrainRun train(
    Network<double>&, const std::vector<TrainSample<double>>&,
    const TrainConfig&, Rng&,
    const std::function<void(Network<double>&, long long)>&);

}  // namespace shotscore
