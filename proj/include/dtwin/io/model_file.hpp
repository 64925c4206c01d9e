#pragma once

#include <filesystem>
#include <string>

#include "dtwin/twin/twin.hpp"

namespace dtwin::io {

inline constexpr std::uint32_t kModelVersion = 1;

/// Binary model container (little-endian, see README for the layout).
std::string encode_model(const twin::TrainedTwin& twin);
twin::TrainedTwin decode_model(const std::string& bytes);

void save_model(const std::filesystem::path& path, const twin::TrainedTwin& twin);
twin::TrainedTwin load_model(const std::filesystem::path& path);

}  // namespace dtwin::io
