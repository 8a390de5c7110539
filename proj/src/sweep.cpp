#include "flaash/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "flaash/random.hpp"

namespace flaash {

std::uint64_t operand_a_seed(std::uint64_t seed) { return seed; }
std::uint64_t operand_b_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

namespace {

CsfTensor last_mode_csf(const DenseTensor& t) { return dense_to_csf(t, t.shape().order() - 1); }

Operands density_operands(const Shape& a_shape, double a_density, const Shape& b_shape, double b_density,
                          std::uint64_t seed) {
  return {last_mode_csf(random_tensor(a_shape, {a_density, operand_a_seed(seed)})),
          last_mode_csf(random_tensor(b_shape, {b_density, operand_b_seed(seed)}))};
}

EngineConfig with_sdpes(std::size_t n) {
  EngineConfig cfg;
  cfg.sdpe_count = n;
  return cfg;
}

Index as_index(double v) { return static_cast<Index>(std::llround(v)); }

SweepPreset density_preset(std::string name, Index free_len, Index contract_len) {
  return {std::move(name),
          "density",
          {0.005, 0.01, 0.02, 0.03, 0.04, 0.05},
          [=](double density, std::uint64_t seed) {
            return density_operands(Shape{free_len, free_len, contract_len}, density, Shape{free_len, contract_len},
                                    0.5, seed);
          },
          [](double) { return with_sdpes(8); }};
}

std::vector<SweepPreset> build_presets() {
  std::vector<SweepPreset> p;
  // 7x7x512 against 7x512, both 10% dense.
  p.push_back({"sdpe-sweep",
               "sdpe_count",
               {1, 2, 4, 8, 16, 32, 64},
               [](double, std::uint64_t seed) {
                 return density_operands(Shape{7, 7, 512}, 0.1, Shape{7, 512}, 0.1, seed);
               },
               [](double n) { return with_sdpes(static_cast<std::size_t>(as_index(n))); }});
  // 5x5xn against 5xn with NNZ pinned to 10% of the n = 512 volumes.
  p.push_back({"volume-sweep",
               "n",
               {512, 1024, 2048, 3584},
               [](double nv, std::uint64_t seed) {
                 const Index n = as_index(nv);
                 return Operands{last_mode_csf(random_tensor_with_nnz(Shape{5, 5, n}, 1280, operand_a_seed(seed))),
                                 last_mode_csf(random_tensor_with_nnz(Shape{5, n}, 256, operand_b_seed(seed)))};
               },
               [](double) { return with_sdpes(8); }});
  // Order N: N-1 modes of length 3 then 512, NNZ pinned to 10% of the order-3
  // volume; against a 1%-dense 3x512 matrix.
  p.push_back({"order-sweep",
               "order",
               {3, 4, 5, 6, 7},
               [](double order, std::uint64_t seed) {
                 std::vector<Index> lengths(as_index(order) - 1, 3);
                 lengths.push_back(512);
                 return Operands{
                     last_mode_csf(random_tensor_with_nnz(Shape(std::move(lengths)), 461, operand_a_seed(seed))),
                     last_mode_csf(random_tensor(Shape{3, 512}, {0.01, operand_b_seed(seed)}))};
               },
               [](double) { return with_sdpes(8); }});
  p.push_back(density_preset("density-sweep-a", 3, 1024));
  p.push_back(density_preset("density-sweep-b", 7, 512));
  p.push_back(density_preset("density-sweep-c", 10, 100));
  return p;
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<Index>& xs) {
  std::string out;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) out.push_back(';');
    out += std::to_string(xs[k]);
  }
  return out;
}

void write_csv_line(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) os << ',';
    os << fields[k];
  }
  os << '\n';
}

}  // namespace

const std::vector<SweepPreset>& sweep_presets() {
  static const std::vector<SweepPreset> presets = build_presets();
  return presets;
}

const SweepPreset& find_preset(std::string_view name) {
  for (const SweepPreset& p : sweep_presets()) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown sweep preset '" + std::string(name) + "'");
}

std::vector<SweepRow> run_sweep(const SweepPreset& preset, std::span<const std::uint64_t> seeds, unsigned threads) {
  const std::size_t total = preset.values.size() * seeds.size();
  std::vector<SweepRow> rows(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      try {
        const double value = preset.values[k / seeds.size()];
        const std::uint64_t seed = seeds[k % seeds.size()];
        const Operands ops = preset.operands(value, seed);
        SweepRow& row = rows[k];
        row.preset = preset.name;
        row.parameter = preset.parameter;
        row.value = value;
        row.seed = seed;
        row.a_shape = ops.a.shape().to_string();
        row.b_shape = ops.b.shape().to_string();
        row.a_nnz = ops.a.nnz();
        row.b_nnz = ops.b.nnz();
        row.config = preset.config(value);
        row.stats = simulate(ops.a, ops.b, row.config).stats;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<std::string> stats_csv_columns() {
  return {"sdpes",          "fifo_depth",          "result_queue_depth", "read_bandwidth",
          "read_latency",   "write_ports",         "clock_ghz",          "job_count",
          "total_cycles",   "time_us",             "jobs_dispatched",    "jobs_completed",
          "mac_count",      "comparisons",         "requests_issued",    "requests_cancelled",
          "entries_fetched", "stale_entries",      "results_written",    "zero_results_dropped",
          "memory_stall_cycles", "result_stall_cycles", "max_grants_in_cycle", "max_writes_in_cycle",
          "max_read_wait",  "max_busy_cycles",     "mean_busy_cycles",   "sdpe_busy_cycles",
          "sdpe_idle_cycles", "sdpe_jobs"};
}

std::vector<std::string> stats_csv_fields(const EngineConfig& cfg, const SimStats& s) {
  using std::to_string;
  return {to_string(cfg.sdpe_count),
          to_string(cfg.fifo_depth),
          to_string(cfg.result_queue_depth),
          to_string(cfg.memory.read_bandwidth),
          to_string(cfg.memory.read_latency),
          to_string(cfg.memory.write_ports),
          fmt_double(cfg.clock_ghz),
          to_string(s.job_count),
          to_string(s.total_cycles),
          fmt_double(s.time_us),
          to_string(s.jobs_dispatched),
          to_string(s.jobs_completed),
          to_string(s.mac_count),
          to_string(s.comparisons),
          to_string(s.requests_issued),
          to_string(s.requests_cancelled),
          to_string(s.entries_fetched),
          to_string(s.stale_entries),
          to_string(s.results_written),
          to_string(s.zero_results_dropped),
          to_string(s.memory_stall_cycles),
          to_string(s.result_stall_cycles),
          to_string(s.max_grants_in_cycle),
          to_string(s.max_writes_in_cycle),
          to_string(s.max_read_wait),
          to_string(s.max_busy_cycles()),
          fmt_double(s.mean_busy_cycles()),
          join(s.sdpe_busy_cycles),
          join(s.sdpe_idle_cycles),
          join(s.sdpe_jobs)};
}

void write_stats_csv(std::ostream& os, const EngineConfig& cfg, const SimStats& stats) {
  write_csv_line(os, stats_csv_columns());
  write_csv_line(os, stats_csv_fields(cfg, stats));
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  std::vector<std::string> header = {"preset", "parameter", "value", "seed", "a_shape", "b_shape", "a_nnz", "b_nnz"};
  for (auto& c : stats_csv_columns()) header.push_back(c);
  write_csv_line(os, header);
  for (const SweepRow& r : rows) {
    std::vector<std::string> f = {r.preset,    r.parameter, fmt_double(r.value), std::to_string(r.seed),
                                  r.a_shape,   r.b_shape,   std::to_string(r.a_nnz), std::to_string(r.b_nnz)};
    for (auto& c : stats_csv_fields(r.config, r.stats)) f.push_back(std::move(c));
    write_csv_line(os, f);
  }
}

}  // namespace flaash
