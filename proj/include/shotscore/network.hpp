#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "shotscore/ops.hpp"
#include "shotscore/rng.hpp"
#include "shotscore/tensor.hpp"

namespace shotscore {

enum class LayerKind { conv, relu, maxpool, flatten, dense, dropout };

// Shape parameters for one stage of the pipeline; validated when the
// network is assembled.
struct LayerSpec {
  LayerKind kind{};
  int filters = 0;       // conv
  int kernel = 0;        // conv
  int units = 0;         // dense
  double keep_prob = 0;  // dropout
};

// Upper bound L of the importance score; predictions are clamped to [0, L]
// at inference.
struct ScoreScale {
  int L = 5;
};

struct ModelConfig {
  int kernel = 5;
  std::array<int, 3> conv_filters{32, 64, 64};
  int hidden_units = 10;
  double keep_prob = 0.5;
  ScoreScale scale{};
};

enum class Mode { train, eval };

// One named parameter with its gradient slot.
template <typename T>
struct ParamRef {
  std::string name;
  Tensor<T>* value;
  Tensor<T>* grad;
};

namespace detail {

template <typename T>
struct ConvLayer {
  int kernel;
  Tensor<T> w, b, gw, gb;
  Tensor<T> cached_input;
};

template <typename T>
struct ReluLayer {
  Tensor<T> cached_input;
};

template <typename T>
struct PoolLayer {
  PoolIndices cached_indices;
};

struct FlattenLayer {
  std::vector<int> cached_dims;
};

template <typename T>
struct DenseLayer {
  Tensor<T> w, b, gw, gb;
  Tensor<T> cached_input;
};

template <typename T>
struct DropoutLayer {
  T keep;
  Tensor<T> mask;  // inverted-dropout scale per element, 0 or 1/keep
};

template <typename T>
using Layer = std::variant<ConvLayer<T>, ReluLayer<T>, PoolLayer<T>,
                           FlattenLayer, DenseLayer<T>, DropoutLayer<T>>;

}  // namespace detail

// The six-stage pipeline: conv+relu, conv+relu+pool, conv+relu+pool,
// flatten, dense+relu+dropout, dense(1). Owns parameters, gradient slots,
// and the activations cached by the latest train-mode forward.
template <typename T>
class Network {
 public:
  Network() = default;

  int input_side() const { return input_side_; }
  int channels() const { return channels_; }
  const ModelConfig& config() const { return config_; }
  const std::vector<LayerSpec>& specs() const { return specs_; }
  std::size_t flatten_width() const;

  Mode mode() const { return mode_; }
  void set_mode(Mode m) { mode_ = m; }

  // When pinned, train-mode forward reuses the dropout masks sampled by the
  // previous unpinned forward instead of drawing new ones. Used by the
  // gradient checker to keep the loss surface fixed.
  void pin_dropout_masks(bool pinned) { masks_pinned_ = pinned; }

  // Returns the predicted importance score. Train mode samples dropout masks
  // from rng and caches activations for backward; eval mode is deterministic
  // and clamps the prediction to [0, L].
  T forward(const Tensor<T>& frame, Rng* rng = nullptr);

  // Accumulates d(loss)/d(parameter) into every gradient slot given
  // d(loss)/d(prediction). Requires a prior train-mode forward.
  void backward(T d_loss_d_pred);

  void zero_grads();

  // Named parameter/gradient pairs in checkpoint order:
  // W1,B1,W2,B2,W3,B3,W4,B4,WR,BR.
  std::vector<ParamRef<T>> params();

  template <typename U>
  Network<U> cast() const;

 private:
  template <typename U>
  friend Network<U> build_network(int, int, const ModelConfig&);
  template <typename U>
  friend class Network;

  int input_side_ = 0;
  int channels_ = 0;
  ModelConfig config_{};
  std::vector<LayerSpec> specs_;
  std::vector<detail::Layer<T>> layers_;
  Mode mode_ = Mode::eval;
  bool masks_pinned_ = false;
  bool have_activations_ = false;
};

// Assembles the model with zero-valued parameters. input_side must be
// divisible by 4 (two 2x pools); flatten width is (input_side/4)^2 * 64.
template <typename T>
Network<T> build_network(int input_side, int channels, const ModelConfig& config);

// Weights ~ U[-1/sqrt(M), 1/sqrt(M)] with M the layer fan-in; biases zero.
template <typename T>
void glorot_init(Network<T>& net, Rng& rng);

extern template class Network<float>;
extern template class Network<double>;
extern template Network<float> build_network(int, int, const ModelConfig&);
extern template Network<double> build_network(int, int, const ModelConfig&);
extern template void glorot_init(Network<float>&, Rng&);
extern template void glorot_init(Network<double>&, Rng&);
extern template Network<double> Network<float>::cast<double>() const;
extern template Network<float> Network<double>::cast<float>() const;

}  // namespace shotscore
