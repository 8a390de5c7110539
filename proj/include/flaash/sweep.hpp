#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flaash/engine.hpp"

namespace flaash {

struct Operands {
  CsfTensor a;
  CsfTensor b;
};

/// Seeds used for the two operands of a workload generated from `seed`.
std::uint64_t operand_a_seed(std::uint64_t seed);
std::uint64_t operand_b_seed(std::uint64_t seed);

/// A named experiment grid: one swept parameter, a workload generator and an
/// engine configuration per grid value. Operands are compressed along their
/// last mode.
struct SweepPreset {
  std::string name;
  std::string parameter;
  std::vector<double> values;
  std::function<Operands(double value, std::uint64_t seed)> operands;
  std::function<EngineConfig(double value)> config;
};

/// sdpe-sweep, volume-sweep, order-sweep, density-sweep-a/b/c.
const std::vector<SweepPreset>& sweep_presets();

/// Throws std::invalid_argument for an unknown name.
const SweepPreset& find_preset(std::string_view name);

struct SweepRow {
  std::string preset;
  std::string parameter;
  double value = 0.0;
  std::uint64_t seed = 0;
  std::string a_shape;
  std::string b_shape;
  Index a_nnz = 0;
  Index b_nnz = 0;
  EngineConfig config;
  SimStats stats;
};

/// One row per (value, seed), ordered value-major then by seed, whatever the
/// thread count. threads == 0 picks the hardware concurrency.
std::vector<SweepRow> run_sweep(const SweepPreset& preset, std::span<const std::uint64_t> seeds,
                                unsigned threads = 0);

/// Column names shared by the `contract` stats file and sweep output.
std::vector<std::string> stats_csv_columns();
std::vector<std::string> stats_csv_fields(const EngineConfig& cfg, const SimStats& stats);

void write_stats_csv(std::ostream& os, const EngineConfig& cfg, const SimStats& stats);
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

}  // namespace flaash
