#pragma once

#include "aet/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace aet {

/// Raw contents of an AETF file: extents plus values in row-major order.
struct RawArray {
  std::vector<std::uint32_t> dims;
  std::vector<double> values;
};

/// Writes `AETF`, version 1, rank, extents and little-endian float64 values.
void write_array(const std::filesystem::path& path, const RawArray& array);
RawArray read_array(const std::filesystem::path& path);

void write_field(const std::filesystem::path& path, const ScalarField& f);

/// Reads a 2D or 3D field with equal extents; throws FormatError otherwise.
ScalarField read_field(const std::filesystem::path& path);

/// Sidecar metadata, kept sorted so files are byte-stable.
using Metadata = std::map<std::string, std::string>;

std::filesystem::path sidecar_path(const std::filesystem::path& data_path);
void write_metadata(const std::filesystem::path& path, const Metadata& meta);
Metadata read_metadata(const std::filesystem::path& path);

/// 64-bit FNV-1a of the raw bytes, as 16 hex digits.
std::string content_hash(std::span<const double> values);
std::string file_hash(const std::filesystem::path& path);

}  // namespace aet
