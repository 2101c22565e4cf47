#include "shotscore/network.hpp"

#include <algorithm>
#include <cmath>

#include "shotscore/error.hpp"

namespace shotscore {

using namespace detail;

namespace {

template <typename T>
void accumulate(Tensor<T>& dst, const Tensor<T>& src) {
  T* d = dst.data();
  const T* s = src.data();
  for (std::size_t i = 0; i < dst.size(); ++i) d[i] += s[i];
}

}  // namespace

template <typename T>
std::size_t Network<T>::flatten_width() const {
  const int side = input_side_ / 4;
  return static_cast<std::size_t>(side) * side * config_.conv_filters[2];
}

template <typename T>
Network<T> build_network(int input_side, int channels, const ModelConfig& config) {
  if (input_side <= 0 || input_side % 4 != 0)
    throw ConfigError("input_side must be a positive multiple of 4, got " +
                      std::to_string(input_side));
  if (channels <= 0) throw ConfigError("channels must be positive");
  if (config.kernel <= 0 || config.kernel % 2 == 0)
    throw ConfigError("conv kernel must be odd and positive, got " +
                      std::to_string(config.kernel));
  if (config.keep_prob <= 0.0 || config.keep_prob > 1.0)
    throw ConfigError("dropout keep probability must be in (0, 1]");
  if (config.hidden_units <= 0) throw ConfigError("hidden_units must be positive");
  if (config.scale.L < 1) throw ConfigError("score scale L must be >= 1");

  Network<T> net;
  net.input_side_ = input_side;
  net.channels_ = channels;
  net.config_ = config;

  const int k = config.kernel;
  const auto conv_spec = [&](int filters) {
    LayerSpec s;
    s.kind = LayerKind::conv;
    s.filters = filters;
    s.kernel = k;
    return s;
  };
  net.specs_ = {
      conv_spec(config.conv_filters[0]),
      {LayerKind::relu},
      conv_spec(config.conv_filters[1]),
      {LayerKind::relu},
      {LayerKind::maxpool},
      conv_spec(config.conv_filters[2]),
      {LayerKind::relu},
      {LayerKind::maxpool},
      {LayerKind::flatten},
      {LayerKind::dense, 0, 0, config.hidden_units},
      {LayerKind::relu},
      {LayerKind::dropout, 0, 0, 0, config.keep_prob},
      {LayerKind::dense, 0, 0, 1},
  };

  // Walk the specs once, tracking the activation shape to size parameters
  // and reject incompatible stacks.
  std::vector<int> shape{input_side, input_side, channels};
  for (const LayerSpec& s : net.specs_) {
    switch (s.kind) {
      case LayerKind::conv: {
        if (shape.size() != 3)
          throw ConfigError("conv layer requires a rank-3 activation");
        ConvLayer<T> l;
        l.kernel = s.kernel;
        l.w = Tensor<T>({s.kernel, s.kernel, shape[2], s.filters});
        l.b = Tensor<T>({s.filters});
        l.gw = Tensor<T>(l.w.dims());
        l.gb = Tensor<T>(l.b.dims());
        net.layers_.push_back(std::move(l));
        shape[2] = s.filters;
        break;
      }
      case LayerKind::relu:
        net.layers_.push_back(ReluLayer<T>{});
        break;
      case LayerKind::maxpool:
        if (shape.size() != 3 || shape[0] % 2 != 0 || shape[1] % 2 != 0)
          throw ConfigError("maxpool requires even spatial dims");
        net.layers_.push_back(PoolLayer<T>{});
        shape[0] /= 2;
        shape[1] /= 2;
        break;
      case LayerKind::flatten: {
        if (shape.size() != 3)
          throw ConfigError("flatten requires a rank-3 activation");
        net.layers_.push_back(FlattenLayer{});
        shape = {shape[0] * shape[1] * shape[2]};
        break;
      }
      case LayerKind::dense: {
        if (shape.size() != 1)
          throw ConfigError("dense layer requires a rank-1 activation");
        DenseLayer<T> l;
        l.w = Tensor<T>({shape[0], s.units});
        l.b = Tensor<T>({s.units});
        l.gw = Tensor<T>(l.w.dims());
        l.gb = Tensor<T>(l.b.dims());
        net.layers_.push_back(std::move(l));
        shape = {s.units};
        break;
      }
      case LayerKind::dropout:
        net.layers_.push_back(DropoutLayer<T>{static_cast<T>(s.keep_prob), {}});
        break;
    }
  }
  if (shape != std::vector<int>{1})
    throw ConfigError("network must end in a scalar regressor");
  return net;
}

template <typename T>
void glorot_init(Network<T>& net, Rng& rng) {
  for (auto& layer : net.params()) {
    if (layer.name[0] != 'W') {
      layer.value->fill(T(0));
      continue;
    }
    const auto& d = layer.value->dims();
    // Fan-in: K*K*Cin for conv filters, input width for dense weights.
    const std::size_t fan_in =
        d.size() == 4 ? static_cast<std::size_t>(d[0]) * d[1] * d[2]
                      : static_cast<std::size_t>(d[0]);
    const T bound = T(1) / std::sqrt(static_cast<T>(fan_in));
    T* p = layer.value->data();
    for (std::size_t i = 0; i < layer.value->size(); ++i) {
      const T u = static_cast<T>(rng.uniform());
      p[i] = (T(2) * u - T(1)) * bound;
    }
  }
}

template <typename T>
T Network<T>::forward(const Tensor<T>& frame, Rng* rng) {
  if (frame.dims() != std::vector<int>{input_side_, input_side_, channels_})
    throw ShapeError("frame dims " + dims_to_string(frame.dims()) +
                     " do not match network input " +
                     dims_to_string({input_side_, input_side_, channels_}));
  const bool train = mode_ == Mode::train;

  Tensor<T> x = frame;
  for (auto& layer : layers_) {
    if (auto* l = std::get_if<ConvLayer<T>>(&layer)) {
      if (train) l->cached_input = x;
      x = conv2d_forward(x, l->w, l->b);
    } else if (auto* l = std::get_if<ReluLayer<T>>(&layer)) {
      if (train) l->cached_input = x;
      x = relu(x);
    } else if (auto* l = std::get_if<PoolLayer<T>>(&layer)) {
      auto r = maxpool_forward(x);
      if (train) l->cached_indices = std::move(r.indices);
      x = std::move(r.output);
    } else if (auto* l = std::get_if<FlattenLayer>(&layer)) {
      if (train) l->cached_dims = x.dims();
      x.reshape({static_cast<int>(x.size())});
    } else if (auto* l = std::get_if<DenseLayer<T>>(&layer)) {
      if (train) l->cached_input = x;
      x = dense_forward(x, l->w, l->b);
    } else if (auto* l = std::get_if<DropoutLayer<T>>(&layer)) {
      if (!train) continue;  // identity at inference
      if (!masks_pinned_ || l->mask.dims() != x.dims()) {
        if (!rng)
          throw StateError("train-mode forward needs an rng for dropout");
        l->mask = Tensor<T>(x.dims());
        const T scale = T(1) / l->keep;
        for (std::size_t i = 0; i < l->mask.size(); ++i)
          l->mask[i] = rng->bernoulli(static_cast<double>(l->keep)) ? scale : T(0);
      }
      for (std::size_t i = 0; i < x.size(); ++i) x[i] *= l->mask[i];
    }
  }
  have_activations_ = train;

  const T y = x[0];
  if (!train)
    return std::clamp(y, T(0), static_cast<T>(config_.scale.L));
  return y;
}

template <typename T>
void Network<T>::backward(T d_loss_d_pred) {
  if (!have_activations_)
    throw StateError("backward requires a prior train-mode forward");

  Tensor<T> g({1}, {d_loss_d_pred});
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
    auto& layer = *it;
    if (auto* l = std::get_if<ConvLayer<T>>(&layer)) {
      auto grads = conv2d_backward(l->cached_input, l->w, g);
      accumulate(l->gw, grads.filters);
      accumulate(l->gb, grads.bias);
      g = std::move(grads.input);
    } else if (auto* l = std::get_if<ReluLayer<T>>(&layer)) {
      g = relu_backward(l->cached_input, g);
    } else if (auto* l = std::get_if<PoolLayer<T>>(&layer)) {
      g = maxpool_backward(l->cached_indices, g);
    } else if (auto* l = std::get_if<FlattenLayer>(&layer)) {
      g.reshape(l->cached_dims);
    } else if (auto* l = std::get_if<DenseLayer<T>>(&layer)) {
      auto grads = dense_backward(l->cached_input, l->w, g);
      accumulate(l->gw, grads.weights);
      accumulate(l->gb, grads.bias);
      g = std::move(grads.input);
    } else if (auto* l = std::get_if<DropoutLayer<T>>(&layer)) {
      if (l->mask.dims() != g.dims())
        throw StateError("dropout mask missing in backward");
      for (std::size_t i = 0; i < g.size(); ++i) g[i] *= l->mask[i];
    }
  }
}

template <typename T>
void Network<T>::zero_grads() {
  for (auto& p : params()) p.grad->fill(T(0));
}

template <typename T>
std::vector<ParamRef<T>> Network<T>::params() {
  std::vector<ParamRef<T>> out;
  int conv_idx = 0;
  int dense_idx = 0;
  const int n_conv = 3;
  for (auto& layer : layers_) {
    if (auto* l = std::get_if<ConvLayer<T>>(&layer)) {
      const std::string idx = std::to_string(++conv_idx);
      out.push_back({"W" + idx, &l->w, &l->gw});
      out.push_back({"B" + idx, &l->b, &l->gb});
    } else if (auto* l = std::get_if<DenseLayer<T>>(&layer)) {
      ++dense_idx;
      const std::string idx =
          dense_idx + n_conv <= 4 ? std::to_string(dense_idx + n_conv) : "R";
      out.push_back({"W" + idx, &l->w, &l->gw});
      out.push_back({"B" + idx, &l->b, &l->gb});
    }
  }
  return out;
}

template <typename T>
template <typename U>
Network<U> Network<T>::cast() const {
  Network<U> out = build_network<U>(input_side_, channels_, config_);
  auto src = const_cast<Network<T>&>(*this).params();
  auto dst = out.params();
  for (std::size_t i = 0; i < src.size(); ++i)
    *dst[i].value = src[i].value->template cast<U>();
  return out;
}

template class Network<float>;
template class Network<double>;
template Network<float> build_network(int, int, const ModelConfig&);
template Network<double> build_network(int, int, const ModelConfig&);
template void glorot_init(Network<float>&, Rng&);
template void glorot_init(Network<double>&, Rng&);
template Network<double> Network<float>::cast<double>() const;
template Network<float> Network<double>::cast<float>() const;

}  // namespace shotscore
