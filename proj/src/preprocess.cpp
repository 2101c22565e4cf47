#include "shotscore/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "shotscore/error.hpp"

namespace shotscore {

namespace {

// a + t*(b-a) rather than (1-t)*a + t*b: exact when a == b, so constant
// images survive resizing untouched.
template <typename T>
T lerp1(T a, T b, T t) {
  return a + t * (b - a);
}

}  // namespace

template <typename T>
Tensor<T> bilinear_resize(const Tensor<T>& img, int out_h, int out_w) {
  if (img.rank() != 3)
    throw ShapeError("resize expects an HxWxC image, got rank " +
                     std::to_string(img.rank()));
  if (out_h < 1 || out_w < 1)
    throw ConfigError("resize target must be positive");
  const int h = img.dims()[0], w = img.dims()[1], c = img.dims()[2];
  if (h == out_h && w == out_w) return img;

  Tensor<T> out({out_h, out_w, c});
  const double sy = static_cast<double>(h) / out_h;
  const double sx = static_cast<double>(w) / out_w;
  for (int oy = 0; oy < out_h; ++oy) {
    const double fy = std::clamp((oy + 0.5) * sy - 0.5, 0.0, h - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, h - 1);
    const T ty = static_cast<T>(fy - y0);
    for (int ox = 0; ox < out_w; ++ox) {
      const double fx = std::clamp((ox + 0.5) * sx - 0.5, 0.0, w - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, w - 1);
      const T tx = static_cast<T>(fx - x0);
      for (int ch = 0; ch < c; ++ch) {
        const T top = lerp1(img.at(y0, x0, ch), img.at(y0, x1, ch), tx);
        const T bot = lerp1(img.at(y1, x0, ch), img.at(y1, x1, ch), tx);
        out.at(oy, ox, ch) = lerp1(top, bot, ty);
      }
    }
  }
  return out;
}

template <typename T>
Tensor<T> center_crop(const Tensor<T>& img, int side) {
  if (img.rank() != 3)
    throw ShapeError("crop expects an HxWxC image, got rank " +
                     std::to_string(img.rank()));
  if (side < 1) throw ConfigError("crop side must be positive");
  const int h = img.dims()[0], w = img.dims()[1], c = img.dims()[2];
  if (side > h || side > w)
    throw ConfigError("crop side " + std::to_string(side) +
                      " exceeds image " + std::to_string(h) + "x" +
                      std::to_string(w));
  const int oy = (h - side) / 2;
  const int ox = (w - side) / 2;
  Tensor<T> out({side, side, c});
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x)
      for (int ch = 0; ch < c; ++ch)
        out.at(y, x, ch) = img.at(oy + y, ox + x, ch);
  return out;
}

template <typename T>
Tensor<T> preprocess(const Tensor<T>& frame, int resize_side, int crop_side) {
  if (crop_side > resize_side)
    throw ConfigError("crop_side " + std::to_string(crop_side) +
                      " exceeds resize_side " + std::to_string(resize_side));
  return center_crop(bilinear_resize(frame, resize_side, resize_side),
                     crop_side);
}

template Tensor<float> bilinear_resize(const Tensor<float>&, int, int);
template Tensor<double> bilinear_resize(const Tensor<double>&, int, int);
template Tensor<float> center_crop(const Tensor<float>&, int);
template Tensor<double> center_crop(const Tensor<double>&, int);
template Tensor<float> preprocess(const Tensor<float>&, int, int);
template Tensor<double> preprocess(const Tensor<double>&, int, int);

}  // namespace shotscore
