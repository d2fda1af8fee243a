#pragma once

// Minimal binary container for dense float64 arrays and for named-parameter
// checkpoints. Little-endian, versioned.
//
//   array file:      "MVFT" u32 version, u32 ndim, u32 dims[], f64 data[]
//   checkpoint file: "MVFC" u32 version, u64 json_len, json bytes (metadata),
//                    u64 count, then per entry: u32 name_len, name bytes,
//                    u32 ndim, u32 dims[], f64 data[]

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mvf {

struct NamedArray {
  std::string name;
  std::vector<int> shape;
  std::vector<double> data;
};

void save_array(const std::filesystem::path& path, const std::vector<int>& shape,
                const std::vector<double>& data);
NamedArray load_array(const std::filesystem::path& path);

void save_checkpoint(const std::filesystem::path& path, const std::string& meta_json,
                     const std::vector<NamedArray>& arrays);
struct Checkpoint {
  std::string meta_json;
  std::vector<NamedArray> arrays;
};
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mvf
