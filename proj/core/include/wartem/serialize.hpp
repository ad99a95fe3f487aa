#pragma once

#include <string>

#include "wartem/twin.hpp"

namespace wartem {

// Checkpoint layout, all multi-byte values little-endian:
//   bytes 0..6  magic "WARTEM1"
//   u32         input_length
//   u32         code_length (resolved)
//   u32         conv block count, then per block: u32 filters, u32 kernel
//   u32         pool_size
//   u32         activation (0 = relu, 1 = identity)
//   f64         loss_weight_lambda
//   f64[]       parameters: left encoder, left decoder, right encoder,
//               right decoder, each flattened in declaration order
void save_twin(const TwinAE& twin, const std::string& path);
TwinAE load_twin(const std::string& path);

}  // namespace wartem
