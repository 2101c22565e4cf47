#pragma once

#include <cstdint>
#include <vector>

#include "shotscore/tensor.hpp"

namespace shotscore {

// Stride-1 cross-correlation with zero "same" padding of (K-1)/2 per edge.
// input H x W x Cin, filters K x K x Cin x Cout (K odd), bias Cout.
// Output spatial dims equal input spatial dims.
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& filters,
                         const Tensor<T>& bias);

template <typename T>
struct ConvGrads {
  Tensor<T> input;
  Tensor<T> filters;
  Tensor<T> bias;
};

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& filters,
                             const Tensor<T>& grad_out);

// Winner positions from a 2x2/stride-2 max-pool, kept for the backward pass.
struct PoolIndices {
  std::vector<int> input_dims;         // H x W x C of the forward input
  std::vector<std::uint32_t> argmax;   // flat input index per output element
};

template <typename T>
struct PoolResult {
  Tensor<T> output;
  PoolIndices indices;
};

// 2x2 window, stride 2, per channel. H and W must be even.
template <typename T>
PoolResult<T> maxpool_forward(const Tensor<T>& input);

// Routes each grad_out element to its argmax position; preserves gradient mass.
template <typename T>
Tensor<T> maxpool_backward(const PoolIndices& indices, const Tensor<T>& grad_out);

// y = W^T x + b with input M, weights M x N, bias N.
template <typename T>
Tensor<T> dense_forward(const Tensor<T>& input, const Tensor<T>& weights,
                        const Tensor<T>& bias);

template <typename T>
struct DenseGrads {
  Tensor<T> input;
  Tensor<T> weights;
  Tensor<T> bias;
};

template <typename T>
DenseGrads<T> dense_backward(const Tensor<T>& input, const Tensor<T>& weights,
                             const Tensor<T>& grad_out);

template <typename T>
Tensor<T> relu(const Tensor<T>& input);

// Subgradient at exactly 0 is taken as 0.
template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& grad_out);

extern template Tensor<float> conv2d_forward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
extern template Tensor<double> conv2d_forward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
extern template ConvGrads<float> conv2d_backward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
extern template ConvGrads<double> conv2d_backward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
extern template PoolResult<float> maxpool_forward(const Tensor<float>&);
extern template PoolResult<double> maxpool_forward(const Tensor<double>&);
extern template Tensor<float> maxpool_backward(const PoolIndices&, const Tensor<float>&);
extern template Tensor<double> maxpool_backward(const PoolIndices&, const Tensor<double>&);
extern template Tensor<float> dense_forward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
extern template Tensor<double> dense_forward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
extern template DenseGrads<float> dense_backward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
extern template DenseGrads<double> dense_backward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
extern template Tensor<float> relu(const Tensor<float>&);
extern template Tensor<double> relu(const Tensor<double>&);
extern template Tensor<float> relu_backward(const Tensor<float>&, const Tensor<float>&);
extern template Tensor<double> relu_backward(const Tensor<double>&, const Tensor<double>&);

}  // namespace shotscore
