#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "flaash/jobgen.hpp"
#include "flaash/memory.hpp"

namespace flaash {

struct SdpeConfig {
  std::size_t fifo_depth = 8;
  std::size_t result_queue_depth = 4;
};

struct ResultRecord {
  Index dest_index = 0;
  double value = 0.0;
};

struct ReadIssue {
  Operand side = Operand::A;
  Index offset = 0;
  std::uint64_t tag = 0;
};

/// Streams one fiber's entry range from tensor memory into a bounded FIFO.
///
/// Requests carry the tag of the job that made them. When a job ends early the
/// loader is disarmed: its FIFO is flushed and responses still in flight for
/// the old tag are discarded on arrival.
class FiberLoader {
 public:
  explicit FiberLoader(std::size_t fifo_depth) : depth_(fifo_depth) {}

  void arm(EntryRange range, std::uint64_t tag);
  void disarm();

  /// Next offset to request, if the FIFO has headroom and the range is not
  /// exhausted. Records the request as outstanding.
  std::optional<Index> next_request();

  /// Accepts a delivery. Throws SimulationFault if it does not match the
  /// oldest outstanding request.
  void accept(const ReadResponse& r);

  /// Forgets the newest `n` outstanding requests (cancelled before grant).
  void retract(std::size_t n);

  /// All requests for the current range made and delivered.
  bool done() const { return cursor_ == end_ && outstanding_current_ == 0; }
  bool exhausted() const { return done() && fifo_.empty(); }

  const Entry* head() const { return fifo_.empty() ? nullptr : &fifo_.front(); }
  void pop() { fifo_.pop_front(); }

  std::size_t occupancy() const { return fifo_.size(); }
  std::size_t outstanding() const { return outstanding_.size(); }
  Index cursor() const { return cursor_; }
  Index end() const { return end_; }
  Index entries_received() const { return received_; }
  Index stale_discarded() const { return stale_; }

 private:
  struct Outstanding {
    std::uint64_t tag;
    Index offset;
  };

  std::size_t depth_;
  std::deque<Entry> fifo_;
  std::deque<Outstanding> outstanding_;
  std::size_t outstanding_current_ = 0;
  Index cursor_ = 0;
  Index end_ = 0;
  std::uint64_t tag_ = 0;
  Index received_ = 0;
  Index stale_ = 0;
};

struct SdpeCounters {
  Index jobs_completed = 0;
  Index results_emitted = 0;
  Index zero_results_dropped = 0;
  Index mac_count = 0;
  Index comparisons = 0;
  Index busy_cycles = 0;
  Index idle_cycles = 0;
  Index data_stall_cycles = 0;    // active, waiting on a FIFO head
  Index result_stall_cycles = 0;  // finished, result queue full
  Index requests_issued = 0;
};

/// Sparse Dot Product Engine: two fiber loaders feeding an intersection and
/// multiply-accumulate unit, a one-job local slot, and a result queue.
///
/// step() advances one cycle in this order: promote the buffered job if none
/// is active; each loader issues at most one read; granted entries enter the
/// FIFOs; then the intersection unit either retires the job (one side
/// exhausted) or makes one index comparison. A job that finishes in cycle t
/// lets the buffered job start in cycle t+1.
class Sdpe {
 public:
  explicit Sdpe(SdpeConfig cfg = {});

  struct StepOutput {
    std::vector<ReadIssue> requests;
    std::optional<ResultRecord> completed_result;
    bool job_completed = false;
  };

  /// Accepted iff the local job slot is free.
  bool assign_job(const Job& job);

  StepOutput step(std::span<const ReadResponse> granted_a, std::span<const ReadResponse> granted_b);

  /// Tell a loader that memory dropped `n` of its ungranted requests.
  void retract(Operand side, std::size_t n) { loader(side).retract(n); }

  std::optional<ResultRecord> pop_result();
  bool has_result() const { return !results_.empty(); }

  bool slot_free() const { return !slot_.has_value(); }
  bool has_active_job() const { return active_.has_value(); }
  bool idle() const { return !active_ && !slot_ && results_.empty(); }
  std::size_t result_queue_size() const { return results_.size(); }

  const FiberLoader& loader(Operand side) const { return side == Operand::A ? loader_a_ : loader_b_; }
  const SdpeCounters& counters() const { return counters_; }

  /// Intersection cycles (comparisons plus the retiring cycle) of the most
  /// recently completed job.
  Index last_job_intersect_cycles() const { return last_job_intersect_cycles_; }

 private:
  FiberLoader& loader(Operand side) { return side == Operand::A ? loader_a_ : loader_b_; }
  void promote();
  bool try_retire(StepOutput& out);

  SdpeConfig cfg_;
  FiberLoader loader_a_;
  FiberLoader loader_b_;
  std::optional<Job> slot_;
  std::optional<Job> active_;
  double accumulator_ = 0.0;
  std::uint64_t tag_ = 0;
  Index job_intersect_cycles_ = 0;
  Index last_job_intersect_cycles_ = 0;
  std::deque<ResultRecord> results_;
  SdpeCounters counters_;
};

}  // namespace flaash
