#pragma once

#include <iosfwd>
#include <string>

#include "shotscore/tensor.hpp"

namespace shotscore {

// FTNS tensor file, little-endian:
//   magic "FTNS" | version u8 = 1 | dtype u8 (1 = f32, 2 = f64) |
//   rank u8 (1-4) | reserved u8 = 0 | rank x u32 dims | row-major payload.
// Round-trips are bit-exact; no compression.

template <typename T>
void write_tensor(std::ostream& out, const Tensor<T>& t);

template <typename T>
void write_tensor(const std::string& path, const Tensor<T>& t);

// Fails with FormatError if the stored dtype does not match T.
template <typename T>
Tensor<T> read_tensor(std::istream& in);

template <typename T>
Tensor<T> read_tensor(const std::string& path);

extern template void write_tensor(std::ostream&, const Tensor<float>&);
extern template void write_tensor(std::ostream&, const Tensor<double>&);
extern template void write_tensor(const std::string&, const Tensor<float>&);
extern template void write_tensor(const std::string&, const Tensor<double>&);
extern template Tensor<float> read_tensor(std::istream&);
extern template Tensor<double> read_tensor(std::istream&);
extern template Tensor<float> read_tensor(const std::string&);
extern template Tensor<double> read_tensor(const std::string&);

}  // namespace shotscore
