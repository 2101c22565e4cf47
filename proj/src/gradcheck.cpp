#include "shotscore/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "shotscore/error.hpp"

namespace shotscore {

namespace {

double loss_at(Network<double>& net, const Tensor<double>& frame,
               double target) {
  const double pred = net.forward(frame, nullptr);  // pinned mask: no draws
  const double e = pred - target;
  return e * e;
}

}  // namespace

GradcheckReport gradcheck(Network<double>& net, const Tensor<double>& frame,
                          double target, int n_samples, Rng& rng) {
  if (n_samples < 1) throw ConfigError("gradcheck sample count must be >= 1");

  net.set_mode(Mode::train);
  net.pin_dropout_masks(true);
  // First forward draws the dropout mask; pinning keeps it for every
  // evaluation below, so the loss surface is a fixed function of the weights.
  net.forward(frame, &rng);

  // Analytic gradient of (pred - target)^2 at the current weights.
  net.zero_grads();
  const double pred = net.forward(frame, nullptr);
  net.backward(2.0 * (pred - target));
  auto params = net.params();

  std::size_t total = 0;
  for (const auto& p : params) total += p.value->size();
  const auto want = std::min<std::size_t>(
      static_cast<std::size_t>(n_samples), total);

  // Distinct flat positions over the concatenated parameter vector.
  std::unordered_set<std::uint64_t> picked;
  GradcheckReport report;
  while (picked.size() < want) {
    const std::uint64_t pos = rng.below(total);
    if (!picked.insert(pos).second) continue;

    std::uint64_t off = pos;
    std::size_t which = 0;
    while (off >= params[which].value->size()) {
      off -= params[which].value->size();
      ++which;
    }
    double& w = params[which].value->data()[off];
    const double analytic = params[which].grad->data()[off];

    const double h = 1e-5 * std::max(1.0, std::abs(w));
    const double saved = w;
    w = saved + h;
    const double lp = loss_at(net, frame, target);
    w = saved - h;
    const double lm = loss_at(net, frame, target);
    w = saved;

    const double numeric = (lp - lm) / (2.0 * h);
    const double rel = std::abs(analytic - numeric) /
                       std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    report.max_rel_err = std::max(report.max_rel_err, rel);
    ++report.checked;
  }

  net.pin_dropout_masks(false);
  return report;
}

}  // namespace shotscore
