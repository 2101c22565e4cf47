#include "shotscore/augment.hpp"

#include "shotscore/error.hpp"

namespace shotscore {

namespace {

template <typename T>
void check_image(const Tensor<T>& img) {
  if (img.rank() != 3)
    throw ShapeError("augment expects an HxWxC image, got rank " +
                     std::to_string(img.rank()));
}

}  // namespace

template <typename T>
Tensor<T> transpose_image(const Tensor<T>& img) {
  check_image(img);
  const int h = img.dims()[0], w = img.dims()[1], c = img.dims()[2];
  if (h != w) throw ShapeError("transpose requires a square image");
  Tensor<T> out({w, h, c});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int ch = 0; ch < c; ++ch) out.at(x, y, ch) = img.at(y, x, ch);
  return out;
}

template <typename T>
Tensor<T> hflip_image(const Tensor<T>& img) {
  check_image(img);
  const int h = img.dims()[0], w = img.dims()[1], c = img.dims()[2];
  Tensor<T> out({h, w, c});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int ch = 0; ch < c; ++ch)
        out.at(y, x, ch) = img.at(y, w - 1 - x, ch);
  return out;
}

template <typename T>
Tensor<T> vflip_image(const Tensor<T>& img) {
  check_image(img);
  const int h = img.dims()[0], w = img.dims()[1], c = img.dims()[2];
  Tensor<T> out({h, w, c});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int ch = 0; ch < c; ++ch)
        out.at(y, x, ch) = img.at(h - 1 - y, x, ch);
  return out;
}

template <typename T>
Tensor<T> augment_image(const Tensor<T>& img, int code) {
  if (code < 1 || code > 8)
    throw ValidationError("augmentation code must be in 1..8, got " +
                          std::to_string(code));
  const int bits = code - 1;
  Tensor<T> out = img;
  if (bits & 1) out = transpose_image(out);
  if (bits & 2) out = hflip_image(out);
  if (bits & 4) out = vflip_image(out);
  return out;
}

template Tensor<float> transpose_image(const Tensor<float>&);
template Tensor<double> transpose_image(const Tensor<double>&);
template Tensor<float> hflip_image(const Tensor<float>&);
template Tensor<double> hflip_image(const Tensor<double>&);
template Tensor<float> vflip_image(const Tensor<float>&);
template Tensor<double> vflip_image(const Tensor<double>&);
template Tensor<float> augment_image(const Tensor<float>&, int);
template Tensor<double> augment_image(const Tensor<double>&, int);

}  // namespace shotscore
