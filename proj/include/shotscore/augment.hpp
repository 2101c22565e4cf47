#pragma once

#include "shotscore/tensor.hpp"

namespace shotscore {

// Square-image symmetries used to enlarge the training set.  Code 1 is the
// identity; codes 2..8 compose transpose, horizontal flip and vertical flip
// so the eight codes cover the full dihedral group of the square.  Bit k of
// (code-1) selects a primitive: bit 0 = transpose, bit 1 = horizontal flip,
// bit 2 = vertical flip, always applied in that order.
template <typename T>
Tensor<T> transpose_image(const Tensor<T>& img);

template <typename T>
Tensor<T> hflip_image(const Tensor<T>& img);

template <typename T>
Tensor<T> vflip_image(const Tensor<T>& img);

template <typename T>
Tensor<T> augment_image(const Tensor<T>& img, int code);

extern template Tensor<float> transpose_image(const Tensor<float>&);
extern template Tensor<double> transpose_image(const Tensor<double>&);
extern template Tensor<float> hflip_image(const Tensor<float>&);
extern template Tensor<double> hflip_image(const Tensor<double>&);
extern template Tensor<float> vflip_image(const Tensor<float>&);
extern template Tensor<double> vflip_image(const Tensor<double>&);
extern template Tensor<float> augment_image(const Tensor<float>&, int);
extern template Tensor<double> augment_image(const Tensor<double>&, int);

}  // namespace shotscore
