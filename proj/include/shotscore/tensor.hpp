#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "shotscore/error.hpp"

namespace shotscore {

// Dense row-major tensor of rank 1-4. Rank-3 image tensors are laid out
// H x W x C, rank-4 filter banks K x K x Cin x Cout. float carries training
// state, double exists for gradient checking.
template <typename T>
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::vector<int> dims) : dims_(std::move(dims)) {
    data_.assign(checked_size(dims_), T(0));
  }

  Tensor(std::vector<int> dims, std::vector<T> data)
      : dims_(std::move(dims)), data_(std::move(data)) {
    if (checked_size(dims_) != data_.size())
      throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                       " does not match dims product " +
                       std::to_string(checked_size(dims_)));
  }

  const std::vector<int>& dims() const { return dims_; }
  int dim(int i) const { return dims_[static_cast<std::size_t>(i)]; }
  int rank() const { return static_cast<int>(dims_.size()); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  // Rank-3 H x W x C access.
  T& at(int y, int x, int c) {
    return data_[(static_cast<std::size_t>(y) * dims_[1] + x) * dims_[2] + c];
  }
  const T& at(int y, int x, int c) const {
    return data_[(static_cast<std::size_t>(y) * dims_[1] + x) * dims_[2] + c];
  }

  // Rank-2 M x N access.
  T& at(int m, int n) {
    return data_[static_cast<std::size_t>(m) * dims_[1] + n];
  }
  const T& at(int m, int n) const {
    return data_[static_cast<std::size_t>(m) * dims_[1] + n];
  }

  void fill(T v) { data_.assign(data_.size(), v); }

  // Same data, new dims; element count must be preserved.
  void reshape(std::vector<int> dims) {
    if (checked_size(dims) != data_.size())
      throw ShapeError("reshape changes element count");
    dims_ = std::move(dims);
  }

  template <typename U>
  Tensor<U> cast() const {
    std::vector<U> out(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i)
      out[i] = static_cast<U>(data_[i]);
    return Tensor<U>(dims_, std::move(out));
  }

  bool all_finite() const {
    for (T v : data_)
      if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.dims_ == b.dims_ && a.data_ == b.data_;
  }

 private:
  static std::size_t checked_size(const std::vector<int>& dims) {
    if (dims.empty() || dims.size() > 4)
      throw ShapeError("tensor rank must be 1-4, got " +
                       std::to_string(dims.size()));
    std::size_t n = 1;
    for (int d : dims) {
      if (d <= 0)
        throw ShapeError("tensor dims must be positive, got " +
                         std::to_string(d));
      n *= static_cast<std::size_t>(d);
    }
    return n;
  }

  std::vector<int> dims_;
  std::vector<T> data_;
};

std::string dims_to_string(const std::vector<int>& dims);

}  // namespace shotscore
