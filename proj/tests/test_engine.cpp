#include <gtest/gtest.h>

#include "flaash/engine.hpp"
#include "flaash/oracle.hpp"
#include "flaash/random.hpp"
#include "flaash/verify.hpp"

using namespace flaash;

namespace {

CsfTensor last_mode(const DenseTensor& d) { return dense_to_csf(d, d.shape().order() - 1); }

CsfTensor random_operand(const Shape& s, double density, std::uint64_t seed) {
  return last_mode(random_tensor(s, {density, seed}));
}

void expect_matches_reference(const CsfTensor& a, const CsfTensor& b, const EngineConfig& cfg) {
  const SimResult r = simulate(a, b, cfg);
  const auto m = first_bit_mismatch(contract_csf_reference(a, b), r.result);
  EXPECT_FALSE(m.has_value()) << "mismatch at flat coordinate";
}

Job job_with(EntryRange a, EntryRange b) {
  Job j;
  j.a = a;
  j.b = b;
  return j;
}

}  // namespace

TEST(Engine, SixJobOperandsUnderManyConfigs) {
  const CsfTensor a = random_operand(Shape{2, 16}, 0.5, 1);
  const CsfTensor b = random_operand(Shape{3, 16}, 0.5, 2);
  for (std::size_t sdpes : {1u, 2u, 3u, 8u})
    for (Index bw : {1u, 4u})
      for (Index lat : {1u, 5u}) {
        EngineConfig cfg;
        cfg.sdpe_count = sdpes;
        cfg.memory.read_bandwidth = bw;
        cfg.memory.read_latency = lat;
        const SimResult r = simulate(a, b, cfg);
        EXPECT_EQ(r.stats.jobs_completed, 6u);
        EXPECT_EQ(r.stats.job_count, 6u);
        expect_matches_reference(a, b, cfg);
      }
}

TEST(Engine, AllZeroOperands) {
  const CsfTensor a = last_mode(DenseTensor(Shape{3, 4, 8}));
  const CsfTensor b = last_mode(DenseTensor(Shape{5, 8}));
  const SimResult r = simulate(a, b, EngineConfig{});
  EXPECT_EQ(r.stats.jobs_completed, 60u);
  EXPECT_EQ(r.stats.results_written, 0u);
  EXPECT_EQ(r.stats.mac_count, 0u);
  EXPECT_EQ(r.stats.zero_results_dropped, 60u);
  EXPECT_EQ(r.result.count_nonzeros(), 0u);
  EXPECT_EQ(r.result.shape(), Shape({3, 4, 5}));
}

TEST(Engine, SingleSdpeSerialBound) {
  EngineConfig cfg;
  cfg.sdpe_count = 1;
  cfg.memory.read_bandwidth = 1;
  const Index c = 8;
  const std::vector<std::pair<DenseTensor, DenseTensor>> cases = {
      {DenseTensor(Shape{2, 4}, {1, 2, 0, 3, 0, 0, 4, 0}), DenseTensor(Shape{2, 4}, {0, 5, 6, 0, 7, 0, 0, 8})},
      {DenseTensor(Shape{1, 6}, {1, 1, 1, 1, 1, 1}), DenseTensor(Shape{3, 6}, {1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0,
                                                                                  3, 3, 3, 3, 3, 3})},
      {DenseTensor(Shape{3, 3}, {0, 0, 1, 2, 0, 0, 0, 3, 0}), DenseTensor(Shape{1, 3}, {4, 5, 6})},
  };
  for (const auto& [da, db] : cases) {
    const CsfTensor a = last_mode(da);
    const CsfTensor b = last_mode(db);
    Index bound = 0;
    for (Index fa = 0; fa < a.fiber_count(); ++fa)
      for (Index fb = 0; fb < b.fiber_count(); ++fb) bound += a.fiber_range(fa).size() + b.fiber_range(fb).size() + c;
    const SimResult r = simulate(a, b, cfg);
    EXPECT_LE(r.stats.total_cycles, bound);
    EXPECT_GE(r.stats.total_cycles, r.stats.entries_fetched);
    expect_matches_reference(a, b, cfg);
  }
}

TEST(Engine, WritePortsDrainOnePerCycle) {
  // Many one-entry jobs finish close together across several SDPEs.
  const CsfTensor a = random_operand(Shape{6, 2}, 1.0, 3);
  const CsfTensor b = random_operand(Shape{6, 2}, 1.0, 4);
  EngineConfig cfg;
  cfg.sdpe_count = 3;
  cfg.result_queue_depth = 1;
  cfg.memory.read_bandwidth = 16;
  const SimResult r = simulate(a, b, cfg);
  EXPECT_EQ(r.stats.max_writes_in_cycle, 1u);
  EXPECT_EQ(r.stats.results_written, 36u);
  EXPECT_GE(r.stats.total_cycles, r.stats.results_written);
  expect_matches_reference(a, b, cfg);
  cfg.memory.write_ports = 2;
  EXPECT_LE(simulate(a, b, cfg).stats.max_writes_in_cycle, 2u);
}

TEST(Engine, DispatchPolicy) {
  std::vector<Sdpe> sdpes(4);
  std::size_t cursor = 0;
  for (std::size_t expect = 0; expect < 4; ++expect) {
    const auto s = dispatch_policy(cursor, sdpes);
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(*s, expect);
    sdpes[*s].assign_job(job_with({0, 0}, {0, 0}));
  }
  EXPECT_FALSE(dispatch_policy(cursor, sdpes).has_value());

  std::vector<Sdpe> partial(4);
  partial[0].assign_job(job_with({0, 0}, {0, 0}));
  std::size_t c2 = 0;
  EXPECT_EQ(dispatch_policy(c2, partial), std::optional<std::size_t>(1));
  EXPECT_EQ(c2, 2u);
  std::size_t c3 = 3;
  EXPECT_EQ(dispatch_policy(c3, partial), std::optional<std::size_t>(3));
  EXPECT_EQ(dispatch_policy(c3, partial), std::optional<std::size_t>(1));
}

TEST(Engine, StatsMacCounts) {
  const CsfTensor a = random_operand(Shape{4, 4, 32}, 0.3, 5);
  const SimResult same = simulate(a, a, EngineConfig{});
  EXPECT_EQ(same.stats.mac_count, total_collisions(a, a));
  Index diag = 0;
  for (Index f = 0; f < a.fiber_count(); ++f) diag += a.fiber_range(f).size();
  EXPECT_EQ(diag, a.nnz());

  const CsfTensor da = random_operand(Shape{3, 10}, 1.0, 6);
  const CsfTensor db = random_operand(Shape{4, 10}, 1.0, 7);
  EXPECT_EQ(simulate(da, db, EngineConfig{}).stats.mac_count, 12u * 10u);
}

TEST(Engine, StatsConsistency) {
  const CsfTensor a = random_operand(Shape{5, 5, 64}, 0.2, 8);
  const CsfTensor b = random_operand(Shape{6, 64}, 0.2, 9);
  EngineConfig cfg;
  cfg.clock_ghz = 2.0;
  const SimResult r = simulate(a, b, cfg);
  const SimStats& s = r.stats;
  EXPECT_EQ(s.jobs_dispatched, s.job_count);
  EXPECT_EQ(s.jobs_completed, s.job_count);
  EXPECT_EQ(s.results_written + s.zero_results_dropped, s.jobs_completed);
  EXPECT_EQ(s.entries_fetched + s.requests_cancelled, s.requests_issued);
  EXPECT_EQ(s.results_written, r.result.count_nonzeros());
  EXPECT_DOUBLE_EQ(s.time_us, static_cast<double>(s.total_cycles) / 2000.0);
  ASSERT_EQ(s.sdpe_busy_cycles.size(), cfg.sdpe_count);
  for (std::size_t k = 0; k < cfg.sdpe_count; ++k) {
    EXPECT_EQ(s.sdpe_busy_cycles[k] + s.sdpe_idle_cycles[k], s.total_cycles);
  }
  Index jobs = 0;
  for (Index j : s.sdpe_jobs) jobs += j;
  EXPECT_EQ(jobs, s.job_count);
  EXPECT_LE(s.max_grants_in_cycle, cfg.memory.read_bandwidth);
  EXPECT_GE(s.total_cycles, s.job_count);
}

TEST(Engine, HigherOrderAndNonLastModes) {
  const DenseTensor da = random_tensor(Shape{2, 3, 2, 2, 8}, {0.4, 10});
  const DenseTensor db = random_tensor(Shape{8, 3}, {0.4, 11});
  const CsfTensor a = dense_to_csf(da, 4);
  const CsfTensor b = dense_to_csf(db, 0);
  const VerifyReport rep = verify_contraction(a, b, EngineConfig{});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.stats.job_count, 24u * 3u);
}

TEST(Engine, RejectsBadInputs) {
  const CsfTensor a = random_operand(Shape{2, 4}, 0.5, 1);
  const CsfTensor b = random_operand(Shape{2, 5}, 0.5, 2);
  EXPECT_THROW(simulate(a, b, EngineConfig{}), std::invalid_argument);
  EngineConfig cfg;
  cfg.sdpe_count = 0;
  EXPECT_THROW(simulate(a, a, cfg), std::invalid_argument);
  cfg = {};
  cfg.fifo_depth = 0;
  EXPECT_THROW(simulate(a, a, cfg), std::invalid_argument);
  cfg = {};
  cfg.clock_ghz = 0.0;
  EXPECT_THROW(simulate(a, a, cfg), std::invalid_argument);
  cfg = {};
  cfg.memory.write_ports = 0;
  EXPECT_THROW(simulate(a, a, cfg), std::invalid_argument);
}

TEST(Engine, Deterministic) {
  const CsfTensor a = random_operand(Shape{7, 7, 128}, 0.1, 12);
  const CsfTensor b = random_operand(Shape{7, 128}, 0.1, 13);
  const SimResult r1 = simulate(a, b, EngineConfig{});
  const SimResult r2 = simulate(a, b, EngineConfig{});
  EXPECT_TRUE(bit_equal(r1.result, r2.result));
  EXPECT_EQ(r1.stats.total_cycles, r2.stats.total_cycles);
  EXPECT_EQ(r1.stats.sdpe_busy_cycles, r2.stats.sdpe_busy_cycles);
}
