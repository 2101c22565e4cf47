#pragma once

#include <cstdint>
#include <vector>

#include "shotscore/network.hpp"
#include "shotscore/tensor.hpp"

namespace shotscore {

struct AdamConfig {
  double alpha = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second moment accumulators, one pair per parameter tensor, plus the
// shared step counter.
template <typename T>
struct AdamState {
  AdamConfig config{};
  std::int64_t t = 0;
  std::vector<Tensor<T>> m;
  std::vector<Tensor<T>> v;

  AdamState() = default;
  AdamState(const AdamConfig& cfg, const std::vector<ParamRef<T>>& params)
      : config(cfg) {
    m.reserve(params.size());
    v.reserve(params.size());
    for (const auto& p : params) {
      m.emplace_back(p.value->dims());
      v.emplace_back(p.value->dims());
    }
  }
};

// One bias-corrected update over all parameters jointly:
//   m <- b1*m + (1-b1)*g        v <- b2*v + (1-b2)*g^2
//   mhat = m/(1-b1^t)           vhat = v/(1-b2^t)
//   w <- w - alpha * mhat / (sqrt(vhat) + eps)
template <typename T>
void adam_step(const std::vector<ParamRef<T>>& params, AdamState<T>& state);

extern template void adam_step(const std::vector<ParamRef<float>>&, AdamState<float>&);
extern template void adam_step(const std::vector<ParamRef<double>>&, AdamState<double>&);

}  // namespace shotscore
