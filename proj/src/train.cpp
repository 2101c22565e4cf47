#include "shotscore/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "shotscore/augment.hpp"
#include "shotscore/error.hpp"

namespace shotscore {

template <typename T>
TrainRun train(
    Network<T>& net, const std::vector<TrainSample<T>>& samples,
    const TrainConfig& config, Rng& rng,
    const std::function<void(Network<T>&, long long)>& on_checkpoint) {
  if (samples.empty()) throw ValidationError("training set is empty");
  if (config.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (config.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (config.checkpoint_every < 0)
    throw ConfigError("checkpoint_every must be >= 0");

  TrainRun run;
  run.epochs = config.epochs;
  run.checkpoint_every = config.checkpoint_every;

  net.set_mode(Mode::train);
  AdamState<T> state(config.adam, net.params());

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  long long iteration = 0;
  for (int epoch = 1; epoch <= config.epochs && !run.stopped_early; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop =
          std::min(order.size(),
                   start + static_cast<std::size_t>(config.batch_size));
      net.zero_grads();
      double batch_sse = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const TrainSample<T>& s = samples[order[k]];
        T pred;
        if (config.augment) {
          const int code = 1 + static_cast<int>(rng.below(8));
          pred = net.forward(augment_image(s.frame, code), &rng);
        } else {
          pred = net.forward(s.frame, &rng);
        }
        const T err = pred - s.target;
        batch_sse += static_cast<double>(err) * static_cast<double>(err);
        net.backward(T(2) * err);  // dC/dy per sample; batch gradient = sum
      }
      ++iteration;
      const double batch_loss = batch_sse / static_cast<double>(stop - start);
      if (!std::isfinite(batch_loss))
        throw NumericError("training diverged: batch loss is not finite at "
                           "iteration " +
                           std::to_string(iteration));
      auto params = net.params();
      adam_step(params, state);
      run.log.push_back({iteration, epoch, batch_loss});
      if (config.checkpoint_every > 0 && on_checkpoint &&
          iteration % config.checkpoint_every == 0)
        on_checkpoint(net, iteration);
      if (config.stop_loss > 0.0 && batch_loss < config.stop_loss) {
        run.stopped_early = true;
        break;
      }
    }
  }
  return run;
}

template TrainRun train(
    Network<float>&, const std::vector<TrainSample<float>>&,
    const TrainConfig&, Rng&,
    const std::function<void(Network<float>&, long long)>&);
template TrainRun train(
    Network<double>&, const std::vector<TrainSample<double>>&,
    const TrainConfig&, Rng&,
    const std::function<void(Network<double>&, long long)>&);

}  // namespace shotscore
