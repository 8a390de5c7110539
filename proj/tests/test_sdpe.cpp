#include <gtest/gtest.h>

#include "flaash/oracle.hpp"
#include "flaash/random.hpp"
#include "flaash/sdpe.hpp"

#include <utility>

using namespace flaash;

namespace {

// Grants every request immediately and delivers it on the following step.
struct Feed {
  std::vector<Entry> a;
  std::vector<Entry> b;
  std::vector<ReadResponse> next_a;
  std::vector<ReadResponse> next_b;

  Sdpe::StepOutput step(Sdpe& s) {
    const std::vector<ReadResponse> ga = std::move(next_a);
    const std::vector<ReadResponse> gb = std::move(next_b);
    next_a.clear();
    next_b.clear();
    Sdpe::StepOutput out = s.step(ga, gb);
    for (const ReadIssue& r : out.requests) {
      if (r.side == Operand::A) {
        next_a.push_back({r.offset, r.tag, a.at(r.offset)});
      } else {
        next_b.push_back({r.offset, r.tag, b.at(r.offset)});
      }
    }
    return out;
  }
};

Job make_job(Index dest, EntryRange a, EntryRange b) {
  Job j;
  j.job_number = dest;
  j.dest_index = dest;
  j.a = a;
  j.b = b;
  return j;
}

}  // namespace

TEST(Sdpe, HandTraceSixPointZero) {
  Feed feed{{{0, 2.0}, {3, 1.5}}, {{3, 4.0}, {5, 1.0}}, {}, {}};
  Sdpe s;
  ASSERT_TRUE(s.assign_job(make_job(9, {0, 2}, {0, 2})));

  auto o1 = feed.step(s);  // requests A0 and B0, nothing resident yet
  EXPECT_EQ(o1.requests.size(), 2u);
  EXPECT_FALSE(o1.job_completed);
  auto o2 = feed.step(s);  // 0 < 3, pop A
  EXPECT_FALSE(o2.job_completed);
  auto o3 = feed.step(s);  // 3 == 3, MAC
  EXPECT_FALSE(o3.job_completed);
  auto o4 = feed.step(s);  // A exhausted, retire
  EXPECT_TRUE(o4.job_completed);
  ASSERT_TRUE(o4.completed_result.has_value());
  EXPECT_EQ(o4.completed_result->value, 6.0);

  EXPECT_EQ(s.last_job_intersect_cycles(), 3u);
  EXPECT_EQ(s.counters().comparisons, 2u);
  EXPECT_EQ(s.counters().mac_count, 1u);
  EXPECT_EQ(s.counters().data_stall_cycles, 1u);
  EXPECT_EQ(s.counters().busy_cycles, 4u);

  const auto r = s.pop_result();
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->dest_index, 9u);
  EXPECT_EQ(r->value, 6.0);
  EXPECT_FALSE(s.pop_result().has_value());
  EXPECT_TRUE(s.idle());
}

TEST(Sdpe, EmptyRangesCompleteImmediatelyWithoutResult) {
  Feed feed;
  Sdpe s;
  ASSERT_TRUE(s.assign_job(make_job(0, {0, 0}, {0, 0})));
  const auto out = feed.step(s);
  EXPECT_TRUE(out.job_completed);
  EXPECT_FALSE(out.completed_result.has_value());
  EXPECT_TRUE(out.requests.empty());
  EXPECT_FALSE(s.has_result());
  EXPECT_EQ(s.counters().zero_results_dropped, 1u);
}

TEST(Sdpe, OneEmptyRangeCompletesWithoutFetchingTheOther) {
  Feed feed{{}, {{0, 1.0}, {1, 2.0}}, {}, {}};
  Sdpe s;
  ASSERT_TRUE(s.assign_job(make_job(0, {0, 0}, {0, 2})));
  const auto out = feed.step(s);
  EXPECT_TRUE(out.job_completed);
  EXPECT_EQ(s.counters().requests_issued, 1u);
}

TEST(Sdpe, IdenticalSingletons) {
  Feed feed{{{4, -1.25}}, {{4, -1.25}}, {}, {}};
  Sdpe s;
  s.assign_job(make_job(0, {0, 1}, {0, 1}));
  std::optional<ResultRecord> got;
  for (int k = 0; k < 10 && !got; ++k) got = feed.step(s).completed_result;
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(got->value, 1.25 * 1.25);
  EXPECT_EQ(s.counters().mac_count, 1u);
}

TEST(Sdpe, SlotAcceptance) {
  Feed feed{{{0, 1.0}, {1, 1.0}}, {{1, 2.0}, {2, 1.0}}, {}, {}};
  Sdpe s;
  EXPECT_TRUE(s.slot_free());
  EXPECT_TRUE(s.assign_job(make_job(0, {0, 2}, {0, 2})));
  EXPECT_FALSE(s.assign_job(make_job(1, {0, 2}, {0, 2})));
  feed.step(s);
  EXPECT_TRUE(s.has_active_job());
  EXPECT_TRUE(s.assign_job(make_job(1, {1, 2}, {0, 1})));
  EXPECT_FALSE(s.assign_job(make_job(2, {0, 2}, {0, 2})));

  Index completed_at = 0;
  for (Index step = 2; step < 20 && completed_at == 0; ++step) {
    if (feed.step(s).job_completed) completed_at = step;
  }
  ASSERT_NE(completed_at, 0u);
  EXPECT_FALSE(s.has_active_job());
  // The buffered job starts on the next step and issues its first reads.
  const auto next = feed.step(s);
  EXPECT_TRUE(s.has_active_job());
  ASSERT_EQ(next.requests.size(), 2u);
  EXPECT_EQ(next.requests[0].offset, 1u);
  EXPECT_EQ(next.requests[0].tag, 2u);

  std::optional<ResultRecord> second;
  for (int k = 0; k < 20 && !second; ++k) second = feed.step(s).completed_result;
  ASSERT_TRUE(second.has_value());
  EXPECT_EQ(s.pop_result()->dest_index, 0u);
  EXPECT_EQ(s.pop_result()->dest_index, 1u);
}

TEST(Sdpe, StaleDeliveriesAreDiscarded) {
  Feed feed{{{0, 1.0}}, {{1, 1.0}, {2, 1.0}, {3, 1.0}, {0, 3.0}}, {}, {}};
  Sdpe s;
  s.assign_job(make_job(0, {0, 1}, {0, 3}));
  bool done = false;
  for (int k = 0; k < 10 && !done; ++k) done = feed.step(s).job_completed;
  ASSERT_TRUE(done);
  EXPECT_FALSE(s.has_result());
  EXPECT_FALSE(feed.next_b.empty());  // a read for the old job is still in flight

  s.assign_job(make_job(1, {0, 1}, {3, 4}));
  std::optional<ResultRecord> got;
  for (int k = 0; k < 10 && !got; ++k) got = feed.step(s).completed_result;
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(got->value, 3.0);
  EXPECT_GE(std::as_const(s).loader(Operand::B).stale_discarded(), 1u);
}

TEST(Sdpe, UnrequestedGrantFaults) {
  Sdpe s;
  s.assign_job(make_job(0, {0, 2}, {0, 2}));
  const std::vector<ReadResponse> bogus = {{1, 1, {0, 1.0}}};
  EXPECT_THROW(s.step(bogus, {}), SimulationFault);
}

TEST(Sdpe, FullResultQueueStalls) {
  Feed feed{{{0, 1.0}}, {{0, 2.0}}, {}, {}};
  Sdpe s({8, 1});
  s.assign_job(make_job(0, {0, 1}, {0, 1}));
  for (int k = 0; k < 10 && !s.has_result(); ++k) feed.step(s);
  ASSERT_TRUE(s.has_result());
  s.assign_job(make_job(1, {0, 1}, {0, 1}));
  for (int k = 0; k < 10; ++k) feed.step(s);
  EXPECT_TRUE(s.has_active_job());
  EXPECT_GT(s.counters().result_stall_cycles, 0u);
  EXPECT_EQ(s.pop_result()->dest_index, 0u);
  const auto out = feed.step(s);
  EXPECT_TRUE(out.job_completed);
  EXPECT_EQ(s.pop_result()->dest_index, 1u);
}

TEST(Sdpe, RejectsZeroDepths) {
  EXPECT_THROW(Sdpe({0, 4}), std::invalid_argument);
  EXPECT_THROW(Sdpe({4, 0}), std::invalid_argument);
}

TEST(FiberLoader, RespectsDepthAndRetract) {
  FiberLoader l(2);
  l.arm({10, 15}, 1);
  EXPECT_EQ(l.next_request(), std::optional<Index>(10));
  EXPECT_EQ(l.next_request(), std::optional<Index>(11));
  EXPECT_FALSE(l.next_request().has_value());
  l.retract(1);
  EXPECT_EQ(l.cursor(), 11u);
  l.accept({10, 1, {3, 1.0}});
  EXPECT_EQ(l.occupancy(), 1u);
  EXPECT_EQ(l.next_request(), std::optional<Index>(11));
  EXPECT_FALSE(l.next_request().has_value());
  EXPECT_THROW(l.accept({12, 1, {4, 1.0}}), SimulationFault);
  EXPECT_THROW(l.retract(5), SimulationFault);
}

TEST(Sdpe, RandomJobsMatchSparseDotAndCycleBounds) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const CsfTensor fa = dense_to_csf(random_tensor(Shape{40}, {0.05 + 0.003 * seed, seed}), 0);
    const CsfTensor fb = dense_to_csf(random_tensor(Shape{40}, {0.4, seed + 7}), 0);
    Feed feed{{fa.entries().begin(), fa.entries().end()}, {fb.entries().begin(), fb.entries().end()}, {}, {}};
    Sdpe s({1 + seed % 4, 2});
    s.assign_job(make_job(0, {0, fa.nnz()}, {0, fb.nnz()}));
    bool done = false;
    for (int k = 0; k < 1000 && !done; ++k) done = feed.step(s).job_completed;
    ASSERT_TRUE(done);
    const auto oracle = sparse_dot_counted(fa.entries(), fb.entries());
    const auto got = s.pop_result();
    if (oracle.value == 0.0) {
      EXPECT_FALSE(got.has_value());
    } else {
      ASSERT_TRUE(got.has_value());
      EXPECT_EQ(std::bit_cast<std::uint64_t>(got->value), std::bit_cast<std::uint64_t>(oracle.value));
    }
    EXPECT_EQ(s.counters().mac_count, oracle.collisions);
    const Index na = fa.nnz(), nb = fb.nnz();
    EXPECT_LE(s.counters().comparisons, na + nb);
    EXPECT_GE(s.last_job_intersect_cycles(), std::max<Index>(std::min(na, nb), 1));
    EXPECT_LE(s.counters().requests_issued, na + nb);
  }
}
