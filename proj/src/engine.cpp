#include "flaash/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "flaash/jobgen.hpp"

namespace flaash {

void EngineConfig::validate() const {
  if (sdpe_count < 1) throw std::invalid_argument("sdpe_count must be >= 1");
  if (fifo_depth < 1) throw std::invalid_argument("fifo_depth must be >= 1");
  if (result_queue_depth < 1) throw std::invalid_argument("result_queue_depth must be >= 1");
  if (!(clock_ghz > 0.0)) throw std::invalid_argument("clock_ghz must be > 0");
  memory.validate();
}

Index SimStats::max_busy_cycles() const {
  return sdpe_busy_cycles.empty() ? 0 : *std::max_element(sdpe_busy_cycles.begin(), sdpe_busy_cycles.end());
}

double SimStats::mean_busy_cycles() const {
  if (sdpe_busy_cycles.empty()) return 0.0;
  const double sum = std::accumulate(sdpe_busy_cycles.begin(), sdpe_busy_cycles.end(), 0.0);
  return sum / static_cast<double>(sdpe_busy_cycles.size());
}

std::optional<std::size_t> dispatch_policy(std::size_t& cursor, std::span<const Sdpe> sdpes) {
  const std::size_t n = sdpes.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t s = (cursor + k) % n;
    if (sdpes[s].slot_free()) {
      cursor = (s + 1) % n;
      return s;
    }
  }
  return std::nullopt;
}

namespace {

// Cycles with no observable activity before the run is declared deadlocked.
constexpr Index kStallLimit = 100000;

}  // namespace

SimResult simulate(const CsfTensor& a, const CsfTensor& b, const EngineConfig& cfg) {
  cfg.validate();
  const JobPlan jobs = plan(a, b);
  const std::size_t n = cfg.sdpe_count;

  TensorMemory memory(a, b, jobs.result_shape, 2 * n, cfg.memory);
  std::vector<Sdpe> sdpes(n, Sdpe(SdpeConfig{cfg.fifo_depth, cfg.result_queue_depth}));
  std::vector<Index> jobs_per_sdpe(n, 0);

  Index next_job = 0;
  std::size_t dispatch_cursor = 0;
  std::size_t collect_cursor = 0;
  Index cycle = 0;
  Index quiet_cycles = 0;
  const Index stall_limit = std::max<Index>(kStallLimit, 4 * cfg.memory.read_latency);

  auto all_idle = [&] { return std::all_of(sdpes.begin(), sdpes.end(), [](const Sdpe& s) { return s.idle(); }); };

  while (next_job < jobs.job_count || !all_idle()) {
    memory.begin_cycle(cycle);
    bool progress = false;

    // Results first, then at most one dispatch.
    Index collected = 0;
    for (std::size_t k = 0; k < n && collected < cfg.memory.write_ports; ++k) {
      const std::size_t s = (collect_cursor + k) % n;
      if (!sdpes[s].has_result()) continue;
      const ResultRecord r = *sdpes[s].pop_result();
      if (!memory.write_result(r.dest_index, r.value)) {
        throw SimulationFault("write port refused a result within its per-cycle budget");
      }
      ++collected;
      collect_cursor = (s + 1) % n;
    }
    progress |= collected > 0;

    if (next_job < jobs.job_count) {
      if (auto s = dispatch_policy(dispatch_cursor, sdpes)) {
        sdpes[*s].assign_job(job_for(jobs, a, b, next_job++));
        ++jobs_per_sdpe[*s];
        progress = true;
      }
    }

    const Index grants_before = memory.stats().grants;
    memory.arbitrate();
    progress |= memory.stats().grants != grants_before;

    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t ra = TensorMemory::requester_id(s, Operand::A);
      const std::size_t rb = TensorMemory::requester_id(s, Operand::B);
      const auto got_a = memory.take_deliveries(ra);
      const auto got_b = memory.take_deliveries(rb);
      const Index comparisons_before = sdpes[s].counters().comparisons;
      Sdpe::StepOutput out = sdpes[s].step(got_a, got_b);
      for (const ReadIssue& req : out.requests) {
        memory.request_read(req.side == Operand::A ? ra : rb, req.side, req.offset, req.tag);
      }
      if (out.job_completed) {
        sdpes[s].retract(Operand::A, memory.cancel_pending(ra));
        sdpes[s].retract(Operand::B, memory.cancel_pending(rb));
      }
      progress |= out.job_completed || !got_a.empty() || !got_b.empty() ||
                  sdpes[s].counters().comparisons != comparisons_before;
    }

    ++cycle;
    quiet_cycles = progress ? 0 : quiet_cycles + 1;
    if (quiet_cycles > stall_limit) {
      throw SimulationFault("no progress for " + std::to_string(quiet_cycles) + " cycles at cycle " +
                            std::to_string(cycle));
    }
  }
  memory.finish();

  SimStats st;
  st.total_cycles = cycle;
  st.time_us = static_cast<double>(cycle) / (cfg.clock_ghz * 1000.0);
  st.job_count = jobs.job_count;
  st.jobs_dispatched = next_job;
  st.sdpe_jobs = jobs_per_sdpe;
  for (const Sdpe& s : sdpes) {
    const SdpeCounters& c = s.counters();
    st.jobs_completed += c.jobs_completed;
    st.mac_count += c.mac_count;
    st.comparisons += c.comparisons;
    st.requests_issued += c.requests_issued;
    st.zero_results_dropped += c.zero_results_dropped;
    st.memory_stall_cycles += c.data_stall_cycles;
    st.result_stall_cycles += c.result_stall_cycles;
    st.stale_entries += s.loader(Operand::A).stale_discarded() + s.loader(Operand::B).stale_discarded();
    st.sdpe_busy_cycles.push_back(c.busy_cycles);
    st.sdpe_idle_cycles.push_back(c.idle_cycles);
  }
  const MemoryStats& ms = memory.stats();
  st.requests_cancelled = ms.cancelled;
  st.entries_fetched = ms.grants;
  st.results_written = ms.writes;
  st.max_grants_in_cycle = ms.max_grants_in_cycle;
  st.max_writes_in_cycle = ms.max_writes_in_cycle;
  st.max_read_wait = ms.max_head_wait;

  return {memory.export_result(), std::move(st)};
}

}  // namespace flaash
