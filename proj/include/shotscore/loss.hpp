#pragma once

#include <utility>
#include <vector>

namespace shotscore {

// Sum-of-squared-errors over a batch: C = sum_n (y_n - yhat_n)^2.
// Returns the total C together with dC/dyhat_n = 2*(yhat_n - y_n) for each
// sample.  Callers that want a per-sample figure divide by the batch size
// themselves; the gradient of the sum is what backprop consumes.
template <typename T>
std::pair<T, std::vector<T>> l2_loss(const std::vector<T>& predicted,
                                     const std::vector<T>& target);

extern template std::pair<float, std::vector<float>> l2_loss(
    const std::vector<float>&, const std::vector<float>&);
extern template std::pair<double, std::vector<double>> l2_loss(
    const std::vector<double>&, const std::vector<double>&);

}  // namespace shotscore
