#include "shotscore/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace shotscore {

// The payload is copied byte-for-byte, which is only little-endian on a
// little-endian host. The file contract fixes LE, so refuse BE builds.
static_assert(std::endian::native == std::endian::little,
              "FTNS serialization assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'F', 'T', 'N', 'S'};
constexpr std::uint8_t kVersion = 1;

template <typename T>
constexpr std::uint8_t dtype_code() {
  return sizeof(T) == 4 ? 1 : 2;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  char b[4];
  in.read(b, 4);
  if (!in) throw FormatError("tensor file truncated in header");
  std::uint32_t v;
  std::memcpy(&v, b, 4);
  return v;
}

}  // namespace

template <typename T>
void write_tensor(std::ostream& out, const Tensor<T>& t) {
  if (t.empty()) throw ValidationError("refusing to write empty tensor");
  out.write(kMagic, 4);
  const std::uint8_t head[4] = {kVersion, dtype_code<T>(),
                                static_cast<std::uint8_t>(t.rank()), 0};
  out.write(reinterpret_cast<const char*>(head), 4);
  for (int d : t.dims()) put_u32(out, static_cast<std::uint32_t>(d));
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(T)));
  if (!out) throw IoError("tensor write failed");
}

template <typename T>
void write_tensor(const std::string& path, const Tensor<T>& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  write_tensor(f, t);
  f.close();
  if (!f) throw IoError("tensor write failed: " + path);
}

template <typename T>
Tensor<T> read_tensor(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in) throw FormatError("tensor file truncated before magic");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("bad tensor magic, expected FTNS");

  std::uint8_t head[4];
  in.read(reinterpret_cast<char*>(head), 4);
  if (!in) throw FormatError("tensor file truncated in header");
  if (head[0] != kVersion)
    throw FormatError("unsupported tensor file version " +
                      std::to_string(head[0]));
  if (head[1] != 1 && head[1] != 2)
    throw FormatError("unsupported tensor dtype code " + std::to_string(head[1]));
  if (head[1] != dtype_code<T>())
    throw FormatError("tensor dtype mismatch: file has " +
                      std::string(head[1] == 1 ? "f32" : "f64"));
  const int rank = head[2];
  if (rank < 1 || rank > 4)
    throw FormatError("tensor rank must be 1-4, got " + std::to_string(rank));

  std::vector<int> dims(static_cast<std::size_t>(rank));
  std::size_t n = 1;
  for (int& d : dims) {
    const std::uint32_t v = get_u32(in);
    if (v == 0) throw FormatError("tensor dim must be positive");
    d = static_cast<int>(v);
    n *= v;
  }
  std::vector<T> data(n);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw FormatError("tensor file truncated in payload");
  return Tensor<T>(std::move(dims), std::move(data));
}

template <typename T>
Tensor<T> read_tensor(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  return read_tensor<T>(f);
}

template void write_tensor(std::ostream&, const Tensor<float>&);
template void write_tensor(std::ostream&, const Tensor<double>&);
template void write_tensor(const std::string&, const Tensor<float>&);
template void write_tensor(const std::string&, const Tensor<double>&);
template Tensor<float> read_tensor(std::istream&);
template Tensor<double> read_tensor(std::istream&);
template Tensor<float> read_tensor(const std::string&);
template Tensor<double> read_tensor(const std::string&);

}  // namespace shotscore
