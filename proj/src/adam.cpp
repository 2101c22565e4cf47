#include "shotscore/adam.hpp"

#include <cmath>
#include <limits>

#include "shotscore/error.hpp"

namespace shotscore {

template <typename T>
void adam_step(const std::vector<ParamRef<T>>& params, AdamState<T>& state) {
  if (params.size() != state.m.size())
    throw ShapeError("adam state does not match parameter list");
  if (state.t == std::numeric_limits<std::int64_t>::max())
    throw StateError("adam step counter overflow");
  state.t += 1;

  const T b1 = static_cast<T>(state.config.beta1);
  const T b2 = static_cast<T>(state.config.beta2);
  const T alpha = static_cast<T>(state.config.alpha);
  const T eps = static_cast<T>(state.config.epsilon);
  const T corr1 = T(1) - static_cast<T>(std::pow(state.config.beta1,
                                                 static_cast<double>(state.t)));
  const T corr2 = T(1) - static_cast<T>(std::pow(state.config.beta2,
                                                 static_cast<double>(state.t)));

  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor<T>& w = *params[k].value;
    const Tensor<T>& g = *params[k].grad;
    Tensor<T>& m = state.m[k];
    Tensor<T>& v = state.v[k];
    if (w.dims() != g.dims() || w.dims() != m.dims())
      throw ShapeError("adam shape mismatch for " + params[k].name);

    T* wp = w.data();
    T* mp = m.data();
    T* vp = v.data();
    const T* gp = g.data();
    const std::size_t n = w.size();
    for (std::size_t i = 0; i < n; ++i) {
      mp[i] = b1 * mp[i] + (T(1) - b1) * gp[i];
      vp[i] = b2 * vp[i] + (T(1) - b2) * gp[i] * gp[i];
      const T mhat = mp[i] / corr1;
      const T vhat = vp[i] / corr2;
      wp[i] -= alpha * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

template void adam_step(const std::vector<ParamRef<float>>&, AdamState<float>&);
template void adam_step(const std::vector<ParamRef<double>>&, AdamState<double>&);

}  // namespace shotscore
