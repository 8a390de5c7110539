#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "flaash/memory.hpp"
#include "flaash/sdpe.hpp"

namespace flaash {

struct EngineConfig {
  std::size_t sdpe_count = 8;
  std::size_t fifo_depth = 8;
  std::size_t result_queue_depth = 4;
  MemoryConfig memory;
  double clock_ghz = 1.0;  // only used to convert cycles to simulated time

  void validate() const;
};

struct SimStats {
  Index total_cycles = 0;
  double time_us = 0.0;  // simulated, total_cycles at clock_ghz
  Index job_count = 0;
  Index jobs_dispatched = 0;
  Index jobs_completed = 0;
  Index mac_count = 0;
  Index comparisons = 0;
  Index requests_issued = 0;
  Index requests_cancelled = 0;
  Index entries_fetched = 0;  // read grants
  Index stale_entries = 0;    // fetched for a job that had already retired
  Index results_written = 0;
  Index zero_results_dropped = 0;
  Index memory_stall_cycles = 0;  // summed over SDPEs
  Index result_stall_cycles = 0;
  Index max_grants_in_cycle = 0;
  Index max_writes_in_cycle = 0;
  Index max_read_wait = 0;
  std::vector<Index> sdpe_busy_cycles;
  std::vector<Index> sdpe_idle_cycles;
  std::vector<Index> sdpe_jobs;

  Index max_busy_cycles() const;
  double mean_busy_cycles() const;
};

struct SimResult {
  DenseTensor result;
  SimStats stats;
};

/// Runs the contraction cycle by cycle. Each cycle:
///   1. collect up to write_ports finished results (round-robin over SDPEs);
///   2. hand at most one job to the next SDPE with a free local slot;
///   3. arbitrate memory reads;
///   4. step every SDPE.
/// The run ends once every job is dispatched and every SDPE is idle with an
/// empty result queue.
SimResult simulate(const CsfTensor& a, const CsfTensor& b, const EngineConfig& cfg);

/// First SDPE at or after `cursor` whose local slot is free; advances the
/// cursor past it.
std::optional<std::size_t> dispatch_policy(std::size_t& cursor, std::span<const Sdpe> sdpes);

}  // namespace flaash
