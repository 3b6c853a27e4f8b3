#pragma once

#include <string>

#include "dra/dataset.hpp"

namespace dra {

enum class DatasetFormat { Csv, Binary };

DatasetFormat dataset_format_from_name(const std::string& name);  // csv|bin

// Canonical text form: header
//   bw_az_deg,...,n_active,cost,accepted,split,w000..wNNN,ach_*
// with doubles at 9 significant digits. Binary form: magic "BTDS", version
// byte, little-endian payload, CRC-32 footer; lossless for doubles.
void save_dataset(const Dataset& ds, const std::string& path,
                  DatasetFormat format);

// Detects the format from the file content (binary magic vs. CSV header).
// Throws DataError on malformed, truncated, mis-versioned, or corrupt files.
Dataset load_dataset(const std::string& path);

}  // namespace dra
