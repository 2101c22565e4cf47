#include "shotscore/loss.hpp"

#include "shotscore/error.hpp"

namespace shotscore {

template <typename T>
std::pair<T, std::vector<T>> l2_loss(const std::vector<T>& predicted,
                                     const std::vector<T>& target) {
  if (predicted.size() != target.size())
    throw ShapeError("loss: predicted and target lengths differ");
  if (predicted.empty()) throw ShapeError("loss: empty batch");

  T total = T(0);
  std::vector<T> grad(predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const T e = predicted[i] - target[i];
    total += e * e;
    grad[i] = T(2) * e;
  }
  return {total, grad};
}

template std::pair<float, std::vector<float>> l2_loss(
    const std::vector<float>&, const std::vector<float>&);
template std::pair<double, std::vector<double>> l2_loss(
    const std::vector<double>&, const std::vector<double>&);

}  // namespace shotscore
