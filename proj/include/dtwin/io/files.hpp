#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace dtwin::io {

/// Writes to a temporary sibling and renames it over `path`, so readers see
/// either the old file or the complete new one. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

}  // namespace dtwin::io
