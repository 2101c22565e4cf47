#pragma once

#include <string>

#include "shotscore/network.hpp"

namespace shotscore {

// FCKP checkpoint file, little-endian:
//   magic "FCKP" | version u8 = 1 | u16 tensor count | per tensor:
//   u16 name length | UTF-8 name (W1,B1,...,WR,BR) | embedded FTNS blob.
// Round-trips reproduce all parameters bit-exactly.

template <typename T>
void checkpoint_save(Network<T>& net, const std::string& path);

// Loads into a freshly built network of the given geometry. Missing or extra
// tensor names and shape mismatches raise CheckpointError.
template <typename T>
Network<T> checkpoint_load(const std::string& path, int input_side,
                           int channels, const ModelConfig& config);

extern template void checkpoint_save(Network<float>&, const std::string&);
extern template void checkpoint_save(Network<double>&, const std::string&);
extern template Network<float> checkpoint_load(const std::string&, int, int, const ModelConfig&);
extern template Network<double> checkpoint_load(const std::string&, int, int, const ModelConfig&);

}  // namespace shotscore
