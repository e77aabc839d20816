#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wickflow/fields.hpp"

namespace wickflow::io {

/// WCK1 snapshot file: "WCK1", u32 K, u32 M, u32 count, then count x M x M
/// little-endian float64 samples, row-major.
void write_snapshots(const std::filesystem::path& path, const std::vector<RealField>& fields);
void write_snapshots(const std::filesystem::path& path, const std::vector<SpectralField>& fields);
std::vector<RealField> read_snapshots(const std::filesystem::path& path);

/// Writes a header row and numeric rows (full precision).
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace wickflow::io
