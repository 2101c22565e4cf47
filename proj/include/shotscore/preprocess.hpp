#pragma once

#include "shotscore/tensor.hpp"

namespace shotscore {

// Bilinear resize of an HxWxC image to out_h x out_w. Sample positions use
// half-pixel centers, src = (dst + 0.5) * (in/out) - 0.5 clamped to the valid
// range, so equal sizes reproduce the input exactly and constant images stay
// constant bit-for-bit.
template <typename T>
Tensor<T> bilinear_resize(const Tensor<T>& img, int out_h, int out_w);

// Central crop to side x side; the offset is (dim - side) / 2 on each axis.
template <typename T>
Tensor<T> center_crop(const Tensor<T>& img, int side);

// The input stage: resize to resize_side^2, then crop to crop_side^2.
// Defaults 284/256; the small test profile uses 36/32.
template <typename T>
Tensor<T> preprocess(const Tensor<T>& frame, int resize_side, int crop_side);

extern template Tensor<float> bilinear_resize(const Tensor<float>&, int, int);
extern template Tensor<double> bilinear_resize(const Tensor<double>&, int, int);
extern template Tensor<float> center_crop(const Tensor<float>&, int);
extern template Tensor<double> center_crop(const Tensor<double>&, int);
extern template Tensor<float> preprocess(const Tensor<float>&, int, int);
extern template Tensor<double> preprocess(const Tensor<double>&, int, int);

}  // namespace shotscore
