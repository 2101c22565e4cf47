#include "shotscore/ops.hpp"

#include <algorithm>
#include <string>

namespace shotscore {

std::string dims_to_string(const std::vector<int>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

namespace {

template <typename T>
void check_conv_shapes(const Tensor<T>& input, const Tensor<T>& filters,
                       const Tensor<T>* bias) {
  if (input.rank() != 3)
    throw ShapeError("conv2d input must be rank 3 HxWxC, got " +
                     dims_to_string(input.dims()));
  if (filters.rank() != 4)
    throw ShapeError("conv2d filters must be rank 4 KxKxCinxCout, got " +
                     dims_to_string(filters.dims()));
  const int k = filters.dim(0);
  if (filters.dim(1) != k)
    throw ShapeError("conv2d kernel must be square, got " +
                     dims_to_string(filters.dims()));
  if (k % 2 == 0)
    throw ShapeError("conv2d kernel size must be odd, got " + std::to_string(k));
  if (filters.dim(2) != input.dim(2))
    throw ShapeError("conv2d channel mismatch: input has " +
                     std::to_string(input.dim(2)) + ", filters expect " +
                     std::to_string(filters.dim(2)));
  if (bias && (bias->rank() != 1 || bias->dim(0) != filters.dim(3)))
    throw ShapeError("conv2d bias must be rank 1 of length Cout");
}

}  // namespace

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& filters,
                         const Tensor<T>& bias) {
  check_conv_shapes(input, filters, &bias);
  const int h = input.dim(0), w = input.dim(1), ci = input.dim(2);
  const int k = filters.dim(0), co = filters.dim(3);
  const int pad = (k - 1) / 2;

  Tensor<T> out({h, w, co});
  const T* in = input.data();
  const T* flt = filters.data();
  const T* b = bias.data();
  T* o = out.data();

#pragma omp parallel for schedule(static) if (static_cast<long>(h) * w * co >= 4096)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      T* orow = o + (static_cast<std::size_t>(y) * w + x) * co;
      for (int c = 0; c < co; ++c) orow[c] = b[c];
      for (int ky = 0; ky < k; ++ky) {
        const int iy = y + ky - pad;
        if (iy < 0 || iy >= h) continue;
        for (int kx = 0; kx < k; ++kx) {
          const int ix = x + kx - pad;
          if (ix < 0 || ix >= w) continue;
          const T* irow = in + (static_cast<std::size_t>(iy) * w + ix) * ci;
          const T* frow = flt + (static_cast<std::size_t>(ky) * k + kx) * ci * co;
          for (int c = 0; c < ci; ++c) {
            const T a = irow[c];
            const T* fr = frow + static_cast<std::size_t>(c) * co;
            for (int cc = 0; cc < co; ++cc) orow[cc] += a * fr[cc];
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& filters,
                             const Tensor<T>& grad_out) {
  check_conv_shapes<T>(input, filters, nullptr);
  const int h = input.dim(0), w = input.dim(1), ci = input.dim(2);
  const int k = filters.dim(0), co = filters.dim(3);
  const int pad = (k - 1) / 2;
  if (grad_out.dims() != std::vector<int>{h, w, co})
    throw ShapeError("conv2d grad_out dims " + dims_to_string(grad_out.dims()) +
                     " do not match output dims");

  ConvGrads<T> g{Tensor<T>({h, w, ci}), Tensor<T>(filters.dims()),
                 Tensor<T>({co})};
  const T* in = input.data();
  const T* flt = filters.data();
  const T* go = grad_out.data();

  // grad_bias: spatial sum per output channel.
  {
    T* gb = g.bias.data();
    for (std::size_t p = 0; p < static_cast<std::size_t>(h) * w; ++p) {
      const T* grow = go + p * co;
      for (int c = 0; c < co; ++c) gb[c] += grow[c];
    }
  }

  // grad_input, gathered so each element is owned by one iteration.
  {
    T* gi = g.input.data();
#pragma omp parallel for schedule(static) if (static_cast<long>(h) * w * ci >= 4096)
    for (int iy = 0; iy < h; ++iy) {
      for (int ix = 0; ix < w; ++ix) {
        T* girow = gi + (static_cast<std::size_t>(iy) * w + ix) * ci;
        for (int ky = 0; ky < k; ++ky) {
          const int y = iy - ky + pad;
          if (y < 0 || y >= h) continue;
          for (int kx = 0; kx < k; ++kx) {
            const int x = ix - kx + pad;
            if (x < 0 || x >= w) continue;
            const T* grow = go + (static_cast<std::size_t>(y) * w + x) * co;
            const T* frow =
                flt + (static_cast<std::size_t>(ky) * k + kx) * ci * co;
            for (int c = 0; c < ci; ++c) {
              const T* fr = frow + static_cast<std::size_t>(c) * co;
              T acc = T(0);
              for (int cc = 0; cc < co; ++cc) acc += fr[cc] * grow[cc];
              girow[c] += acc;
            }
          }
        }
      }
    }
  }

  // grad_filters, one (ky,kx,ci) row of Cout accumulators per iteration.
  {
    T* gf = g.filters.data();
    const int kk = k * k;
#pragma omp parallel for schedule(static) if (static_cast<long>(h) * w * co >= 4096)
    for (int tap = 0; tap < kk * ci; ++tap) {
      const int kyx = tap / ci;
      const int c = tap % ci;
      const int ky = kyx / k, kx = kyx % k;
      T* gfrow = gf + (static_cast<std::size_t>(kyx) * ci + c) * co;
      const int y0 = std::max(0, pad - ky), y1 = std::min(h, h + pad - ky);
      const int x0 = std::max(0, pad - kx), x1 = std::min(w, w + pad - kx);
      for (int y = y0; y < y1; ++y) {
        const int iy = y + ky - pad;
        for (int x = x0; x < x1; ++x) {
          const int ix = x + kx - pad;
          const T a = in[(static_cast<std::size_t>(iy) * w + ix) * ci + c];
          const T* grow = go + (static_cast<std::size_t>(y) * w + x) * co;
          for (int cc = 0; cc < co; ++cc) gfrow[cc] += a * grow[cc];
        }
      }
    }
  }
  return g;
}

template <typename T>
PoolResult<T> maxpool_forward(const Tensor<T>& input) {
  if (input.rank() != 3)
    throw ShapeError("maxpool input must be rank 3 HxWxC, got " +
                     dims_to_string(input.dims()));
  const int h = input.dim(0), w = input.dim(1), c = input.dim(2);
  if (h % 2 != 0 || w % 2 != 0)
    throw ShapeError("maxpool needs even spatial dims, got " +
                     dims_to_string(input.dims()));

  PoolResult<T> r{Tensor<T>({h / 2, w / 2, c}), {}};
  r.indices.input_dims = input.dims();
  r.indices.argmax.resize(r.output.size());
  const T* in = input.data();
  T* out = r.output.data();
  std::uint32_t* arg = r.indices.argmax.data();

  const int oh = h / 2, ow = w / 2;
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        std::size_t best = (static_cast<std::size_t>(2 * y) * w + 2 * x) * c + ch;
        T bv = in[best];
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const std::size_t idx =
                (static_cast<std::size_t>(2 * y + dy) * w + 2 * x + dx) * c + ch;
            if (in[idx] > bv) {
              bv = in[idx];
              best = idx;
            }
          }
        }
        const std::size_t oidx = (static_cast<std::size_t>(y) * ow + x) * c + ch;
        out[oidx] = bv;
        arg[oidx] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return r;
}

template <typename T>
Tensor<T> maxpool_backward(const PoolIndices& indices, const Tensor<T>& grad_out) {
  const auto& d = indices.input_dims;
  if (grad_out.size() != indices.argmax.size())
    throw ShapeError("maxpool grad_out does not match recorded index map");
  Tensor<T> gi(d);
  T* g = gi.data();
  const T* go = grad_out.data();
  for (std::size_t i = 0; i < indices.argmax.size(); ++i)
    g[indices.argmax[i]] += go[i];
  return gi;
}

template <typename T>
Tensor<T> dense_forward(const Tensor<T>& input, const Tensor<T>& weights,
                        const Tensor<T>& bias) {
  if (input.rank() != 1 || weights.rank() != 2 || bias.rank() != 1)
    throw ShapeError("dense expects input[M], weights[MxN], bias[N]");
  const int m = input.dim(0), n = weights.dim(1);
  if (weights.dim(0) != m || bias.dim(0) != n)
    throw ShapeError("dense shape mismatch: input " + dims_to_string(input.dims()) +
                     ", weights " + dims_to_string(weights.dims()) + ", bias " +
                     dims_to_string(bias.dims()));

  Tensor<T> out({n});
  const T* x = input.data();
  const T* wt = weights.data();
  T* y = out.data();
  for (int j = 0; j < n; ++j) y[j] = bias[static_cast<std::size_t>(j)];
  for (int i = 0; i < m; ++i) {
    const T a = x[i];
    const T* wr = wt + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) y[j] += a * wr[j];
  }
  return out;
}

template <typename T>
DenseGrads<T> dense_backward(const Tensor<T>& input, const Tensor<T>& weights,
                             const Tensor<T>& grad_out) {
  if (input.rank() != 1 || weights.rank() != 2)
    throw ShapeError("dense expects input[M], weights[MxN]");
  const int m = input.dim(0), n = weights.dim(1);
  if (weights.dim(0) != m || grad_out.rank() != 1 || grad_out.dim(0) != n)
    throw ShapeError("dense backward shape mismatch");

  DenseGrads<T> g{Tensor<T>({m}), Tensor<T>({m, n}), grad_out};
  const T* x = input.data();
  const T* wt = weights.data();
  const T* go = grad_out.data();
  T* gi = g.input.data();
  T* gw = g.weights.data();
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * n >= 8192)
  for (int i = 0; i < m; ++i) {
    const T* wr = wt + static_cast<std::size_t>(i) * n;
    T* gwr = gw + static_cast<std::size_t>(i) * n;
    const T a = x[i];
    T acc = T(0);
    for (int j = 0; j < n; ++j) {
      acc += wr[j] * go[j];
      gwr[j] = a * go[j];
    }
    gi[i] = acc;
  }
  return g;
}

template <typename T>
Tensor<T> relu(const Tensor<T>& input) {
  Tensor<T> out(input.dims());
  const T* in = input.data();
  T* o = out.data();
  for (std::size_t i = 0; i < input.size(); ++i) o[i] = in[i] > T(0) ? in[i] : T(0);
  return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& grad_out) {
  if (input.dims() != grad_out.dims())
    throw ShapeError("relu backward shape mismatch");
  Tensor<T> gi(input.dims());
  const T* in = input.data();
  const T* go = grad_out.data();
  T* g = gi.data();
  for (std::size_t i = 0; i < input.size(); ++i)
    g[i] = in[i] > T(0) ? go[i] : T(0);
  return gi;
}

template Tensor<float> conv2d_forward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
template Tensor<double> conv2d_forward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
template ConvGrads<float> conv2d_backward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
template ConvGrads<double> conv2d_backward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
template PoolResult<float> maxpool_forward(const Tensor<float>&);
template PoolResult<double> maxpool_forward(const Tensor<double>&);
template Tensor<float> maxpool_backward(const PoolIndices&, const Tensor<float>&);
template Tensor<double> maxpool_backward(const PoolIndices&, const Tensor<double>&);
template Tensor<float> dense_forward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
template Tensor<double> dense_forward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
template DenseGrads<float> dense_backward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&);
template DenseGrads<double> dense_backward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&);
template Tensor<float> relu(const Tensor<float>&);
template Tensor<double> relu(const Tensor<double>&);
template Tensor<float> relu_backward(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> relu_backward(const Tensor<double>&, const Tensor<double>&);

}  // namespace shotscore
