#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "flaash/tensor.hpp"

namespace flaash {

/// Tensor interchange document, format tag "csft-v1":
///
///   {"format":"csft-v1","shape":[...],"contraction_mode":M,
///    "coords":[[c0,...,cN-1],...],"values":[...]}
///
/// Coordinates are full and 0-based, sorted lexicographically, with one
/// finite nonzero value each. The loader rejects anything else with
/// FormatError and builds CSF compressed along `contraction_mode`.
inline constexpr const char* kCsftFormat = "csft-v1";

nlohmann::ordered_json to_csft_json(const CsfTensor& t);
CsfTensor from_csft_json(const nlohmann::json& doc);

std::string dump_csft(const CsfTensor& t);
CsfTensor parse_csft(const std::string& text);

void save_csft(const std::filesystem::path& path, const CsfTensor& t);
CsfTensor load_csft(const std::filesystem::path& path);

}  // namespace flaash
