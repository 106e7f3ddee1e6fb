#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace s2l {

std::string read_file(const std::filesystem::path& path);

// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Regular files directly under `dir` with the given extension, sorted by name.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir, std::string_view extension);

}  // namespace s2l
