#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "flaash/csft_io.hpp"
#include "flaash/engine.hpp"
#include "flaash/oracle.hpp"
#include "flaash/random.hpp"
#include "flaash/sweep.hpp"
#include "flaash/verify.hpp"

namespace flaash::cli {

namespace {

struct EngineFlags {
  std::optional<std::size_t> mode_a;
  std::optional<std::size_t> mode_b;
  EngineConfig cfg;
};

void add_engine_flags(CLI::App* app, EngineFlags& f) {
  app->add_option("--mode-a", f.mode_a, "Contraction mode of A (default: last)");
  app->add_option("--mode-b", f.mode_b, "Contraction mode of B (default: last)");
  app->add_option("--sdpes", f.cfg.sdpe_count, "Number of SDPEs")->capture_default_str();
  app->add_option("--fifo-depth", f.cfg.fifo_depth, "Entries per fiber-loader FIFO")->capture_default_str();
  app->add_option("--result-queue-depth", f.cfg.result_queue_depth, "Results buffered per SDPE")
      ->capture_default_str();
  app->add_option("--read-bandwidth", f.cfg.memory.read_bandwidth, "Entries granted per cycle")
      ->capture_default_str();
  app->add_option("--read-latency", f.cfg.memory.read_latency, "Cycles from grant to delivery")
      ->capture_default_str();
  app->add_option("--write-ports", f.cfg.memory.write_ports, "Result writes per cycle")->capture_default_str();
  app->add_option("--clock-ghz", f.cfg.clock_ghz, "Clock used to report simulated time")->capture_default_str();
}

Operands load_operands(const std::string& a_path, const std::string& b_path, const EngineFlags& f) {
  CsfTensor a = load_csft(a_path);
  CsfTensor b = load_csft(b_path);
  const std::size_t ma = f.mode_a.value_or(a.shape().order() - 1);
  const std::size_t mb = f.mode_b.value_or(b.shape().order() - 1);
  if (ma >= a.shape().order() || mb >= b.shape().order()) {
    throw std::invalid_argument("contraction mode out of range");
  }
  CsfTensor ra = with_contraction_mode(a, ma);
  CsfTensor rb = with_contraction_mode(b, mb);
  return {std::move(ra), std::move(rb)};
}

std::string coord_string(const std::vector<Index>& coord) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < coord.size(); ++k) os << (k ? "," : "") << coord[k];
  os << ')';
  return os.str();
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw std::invalid_argument("empty seed in list");
    std::size_t used = 0;
    seeds.push_back(std::stoull(tok, &used));
    if (used != tok.size()) throw std::invalid_argument("bad seed '" + tok + "'");
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  return seeds;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << text;
  if (!os) throw std::runtime_error("failed writing " + path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycle-level sparse tensor contraction accelerator simulator", "flaash"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random tensor file");
  std::string gen_shape;
  double gen_density = 0.1;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--shape", gen_shape, "Mode lengths, e.g. 7,7,512")->required();
  gen->add_option("--density", gen_density, "Probability an element is nonzero")->required();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("-o,--output", gen_out, "Output csft-v1 file")->required();

  // contract
  auto* contract = app.add_subcommand("contract", "Contract two tensors on the simulated accelerator");
  std::string c_a, c_b, c_out, c_stats;
  EngineFlags c_flags;
  contract->add_option("a", c_a, "Operand A (csft-v1)")->required();
  contract->add_option("b", c_b, "Operand B (csft-v1)")->required();
  add_engine_flags(contract, c_flags);
  contract->add_option("-o,--output", c_out, "Result csft-v1 file")->required();
  contract->add_option("--stats", c_stats, "Statistics CSV")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Check the simulator against both reference contractions");
  std::string v_a, v_b;
  EngineFlags v_flags;
  verify->add_option("a", v_a, "Operand A (csft-v1)")->required();
  verify->add_option("b", v_b, "Operand B (csft-v1)")->required();
  add_engine_flags(verify, v_flags);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run an experiment preset and write CSV");
  std::string s_preset, s_seeds, s_out;
  unsigned s_threads = 0;
  std::vector<std::string> names;
  for (const auto& p : sweep_presets()) names.push_back(p.name);
  sweep->add_option("--preset", s_preset, "Preset name")->required()->check(CLI::IsMember(names));
  sweep->add_option("--seeds", s_seeds, "Comma-separated seeds")->required();
  sweep->add_option("-o,--output", s_out, "Output CSV")->required();
  sweep->add_option("--threads", s_threads, "Worker threads (0 = all cores)")->capture_default_str();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "flaash: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const Shape shape = parse_shape(gen_shape);
      const CsfTensor t = dense_to_csf(random_tensor(shape, {gen_density, gen_seed}), shape.order() - 1);
      save_csft(gen_out, t);
      out << "wrote " << gen_out << ": shape " << shape.to_string() << ", nnz " << t.nnz() << "\n";
      return kExitOk;
    }
    if (contract->parsed()) {
      const Operands ops = load_operands(c_a, c_b, c_flags);
      const SimResult sim = simulate(ops.a, ops.b, c_flags.cfg);
      const CsfTensor result = sparsify_result(sim.result, sim.result.shape().order() - 1);
      save_csft(c_out, result);
      std::ostringstream csv;
      write_stats_csv(csv, c_flags.cfg, sim.stats);
      write_file(c_stats, csv.str());
      out << "jobs " << sim.stats.jobs_completed << ", cycles " << sim.stats.total_cycles << " (" << sim.stats.time_us
          << " us simulated), result nnz " << result.nnz() << "\n";
      return kExitOk;
    }
    if (verify->parsed()) {
      const Operands ops = load_operands(v_a, v_b, v_flags);
      const VerifyReport report = verify_contraction(ops.a, ops.b, v_flags.cfg);
      auto line = [&](const char* what, const std::optional<Mismatch>& m) {
        if (!m) {
          out << what << ": PASS\n";
        } else {
          out << what << ": FAIL at " << coord_string(m->coord) << " expected " << m->expected << " got "
              << m->actual << "\n";
        }
      };
      line("reference (bit-exact)", report.vs_reference);
      line("dense (rel 1e-12)", report.vs_dense);
      out << "jobs " << report.stats.jobs_completed << ", cycles " << report.stats.total_cycles << "\n";
      return report.passed() ? kExitOk : kExitMismatch;
    }
    if (sweep->parsed()) {
      const auto seeds = parse_seeds(s_seeds);
      const auto rows = run_sweep(find_preset(s_preset), seeds, s_threads);
      std::ostringstream csv;
      write_sweep_csv(csv, rows);
      write_file(s_out, csv.str());
      out << "wrote " << rows.size() << " rows to " << s_out << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "flaash: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace flaash::cli
