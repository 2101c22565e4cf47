#pragma once

#include "shotscore/network.hpp"
#include "shotscore/rng.hpp"
#include "shotscore/tensor.hpp"

namespace shotscore {

struct GradcheckReport {
  double max_rel_err = 0.0;
  int checked = 0;  // number of parameter scalars probed
};

// Compares the analytic gradient of the squared-error loss (pred - target)^2
// against central finite differences on n_samples randomly chosen parameter
// scalars. Runs in 64-bit mode with the dropout mask pinned so both
// difference evaluations see the same loss surface. Relative error is
// |a - n| / max(|a|, |n|, 1e-6); the floor keeps exactly-zero gradients
// (dropped units, dead relus) from dividing by zero.
GradcheckReport gradcheck(Network<double>& net, const Tensor<double>& frame,
                          double target, int n_samples, Rng& rng);

}  // namespace shotscore
