#include "flaash/csft_io.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace flaash {

using nlohmann::json;

nlohmann::ordered_json to_csft_json(const CsfTensor& t) {
  using ojson = nlohmann::ordered_json;
  ojson coords = ojson::array();
  ojson values = ojson::array();
  for (const CoordinateEntry& ce : to_coordinates(t)) {
    coords.push_back(ce.coord);
    values.push_back(ce.value);
  }
  ojson doc;
  doc["format"] = kCsftFormat;
  doc["shape"] = std::vector<Index>(t.shape().lengths().begin(), t.shape().lengths().end());
  doc["contraction_mode"] = t.contraction_mode();
  doc["coords"] = std::move(coords);
  doc["values"] = std::move(values);
  return doc;
}

namespace {

Index as_index(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw FormatError(std::string(what) + " must be a non-negative integer");
  }
  return j.get<Index>();
}

}  // namespace

CsfTensor from_csft_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("csft document must be a JSON object");
  for (const char* key : {"format", "shape", "contraction_mode", "coords", "values"}) {
    if (!doc.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  }
  if (doc["format"] != kCsftFormat) throw FormatError("unsupported format tag");

  const json& jshape = doc["shape"];
  if (!jshape.is_array() || jshape.empty()) throw FormatError("shape must be a non-empty array");
  std::vector<Index> lengths;
  for (const json& len : jshape) lengths.push_back(as_index(len, "mode length"));
  std::optional<Shape> shape;
  try {
    shape.emplace(std::move(lengths));
  } catch (const std::exception& e) {
    throw FormatError(std::string("invalid shape: ") + e.what());
  }

  const Index mode = as_index(doc["contraction_mode"], "contraction_mode");
  if (mode >= shape->order()) throw FormatError("contraction_mode out of range");

  const json& jcoords = doc["coords"];
  const json& jvalues = doc["values"];
  if (!jcoords.is_array() || !jvalues.is_array()) throw FormatError("coords and values must be arrays");
  if (jcoords.size() != jvalues.size()) throw FormatError("coords and values differ in length");

  std::vector<CoordinateEntry> entries;
  entries.reserve(jcoords.size());
  for (std::size_t k = 0; k < jcoords.size(); ++k) {
    const json& jc = jcoords[k];
    if (!jc.is_array() || jc.size() != shape->order()) {
      throw FormatError("coordinate " + std::to_string(k) + " has wrong arity");
    }
    CoordinateEntry ce;
    for (std::size_t m = 0; m < jc.size(); ++m) {
      const Index c = as_index(jc[m], "coordinate");
      if (c >= (*shape)[m]) throw FormatError("coordinate " + std::to_string(k) + " out of range");
      ce.coord.push_back(c);
    }
    if (!jvalues[k].is_number()) throw FormatError("value " + std::to_string(k) + " is not a number");
    ce.value = jvalues[k].get<double>();
    if (!std::isfinite(ce.value)) throw FormatError("value " + std::to_string(k) + " is not finite");
    if (ce.value == 0.0) throw FormatError("value " + std::to_string(k) + " is zero");
    if (k > 0) {
      const auto& prev = entries.back().coord;
      if (prev == ce.coord) throw FormatError("duplicate coordinate at " + std::to_string(k));
      if (!(prev < ce.coord)) throw FormatError("coordinates not sorted at " + std::to_string(k));
    }
    entries.push_back(std::move(ce));
  }
  return csf_from_coordinates(*shape, mode, entries);
}

std::string dump_csft(const CsfTensor& t) { return to_csft_json(t).dump() + "\n"; }

CsfTensor parse_csft(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  return from_csft_json(doc);
}

void save_csft(const std::filesystem::path& path, const CsfTensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << dump_csft(t);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

CsfTensor load_csft(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csft(buf.str());
}

}  // namespace flaash
