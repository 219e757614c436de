#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gradednn/graded_nn.hpp"

namespace gnn {

/// Serializes to
///   {"gradings": [input, out_0, ...],
///    "layers": [{"rows", "cols", "weight_base" (row-major), "bias", "activation", "blocks"?}],
///    "head"?: {"weights", "exponents", "bias"}}
/// Gradings and exponents are written as rational strings. Doubles round-trip bit-exactly.
std::string network_to_json(const Network& net);
Network network_from_json(std::string_view text);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace gnn
