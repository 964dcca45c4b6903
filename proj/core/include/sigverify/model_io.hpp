#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "sigverify/gru.hpp"

namespace sigverify {

// "GRUM" | version u32 | input u32 | hidden1 u32 | hidden2 u32 | embedding u32 |
// every tensor of GruModel::visit order as little-endian f64 (column-major
// within a matrix).
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::vector<unsigned char> serialize(const GruModel& model);

/// Throws ParseError on a malformed container and InvalidArgument when
/// `expected_input_dim` is given and differs from the stored input width.
GruModel deserialize_model(std::span<const unsigned char> bytes,
                           std::optional<int> expected_input_dim = std::nullopt);

void save_model(const GruModel& model, const std::filesystem::path& path);
GruModel load_model(const std::filesystem::path& path, std::optional<int> expected_input_dim = std::nullopt);

}  // namespace sigverify
