#include "shotscore/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>

#include "shotscore/tensor_io.hpp"

namespace shotscore {

namespace {

constexpr char kMagic[4] = {'F', 'C', 'K', 'P'};
constexpr std::uint8_t kVersion = 1;

void put_u16(std::ostream& out, std::uint16_t v) {
  char b[2];
  std::memcpy(b, &v, 2);
  out.write(b, 2);
}

std::uint16_t get_u16(std::istream& in) {
  char b[2];
  in.read(b, 2);
  if (!in) throw FormatError("checkpoint truncated");
  std::uint16_t v;
  std::memcpy(&v, b, 2);
  return v;
}

}  // namespace

template <typename T>
void checkpoint_save(Network<T>& net, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);

  const auto params = net.params();
  f.write(kMagic, 4);
  f.put(static_cast<char>(kVersion));
  put_u16(f, static_cast<std::uint16_t>(params.size()));
  for (const auto& p : params) {
    put_u16(f, static_cast<std::uint16_t>(p.name.size()));
    f.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    write_tensor(f, *p.value);
  }
  f.close();
  if (!f) throw IoError("checkpoint write failed: " + path);
}

template <typename T>
Network<T> checkpoint_load(const std::string& path, int input_side,
                           int channels, const ModelConfig& config) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);

  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("bad checkpoint magic, expected FCKP");
  const int version = f.get();
  if (version != kVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  const std::uint16_t count = get_u16(f);

  std::map<std::string, Tensor<T>> tensors;
  for (std::uint16_t i = 0; i < count; ++i) {
    const std::uint16_t len = get_u16(f);
    std::string name(len, '\0');
    f.read(name.data(), len);
    if (!f) throw FormatError("checkpoint truncated in tensor name");
    if (!tensors.emplace(name, read_tensor<T>(f)).second)
      throw FormatError("duplicate tensor name in checkpoint: " + name);
  }

  Network<T> net = build_network<T>(input_side, channels, config);
  std::size_t used = 0;
  for (auto& p : net.params()) {
    auto it = tensors.find(p.name);
    if (it == tensors.end())
      throw CheckpointError("checkpoint is missing tensor " + p.name);
    if (it->second.dims() != p.value->dims())
      throw CheckpointError("checkpoint tensor " + p.name + " has dims " +
                            dims_to_string(it->second.dims()) +
                            ", network expects " +
                            dims_to_string(p.value->dims()));
    *p.value = std::move(it->second);
    ++used;
  }
  if (used != tensors.size())
    throw CheckpointError("checkpoint contains tensors the network does not use");
  return net;
}

template void checkpoint_save(Network<float>&, const std::string&);
template void checkpoint_save(Network<double>&, const std::string&);
template Network<float> checkpoint_load(const std::string&, int, int, const ModelConfig&);
template Network<double> checkpoint_load(const std::string&, int, int, const ModelConfig&);

}  // namespace shotscore
