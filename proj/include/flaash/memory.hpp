#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

#include "flaash/tensor.hpp"

namespace flaash {

enum class Operand : std::uint8_t { A = 0, B = 1 };

struct MemoryConfig {
  Index read_bandwidth = 4;  // entries granted per cycle, shared by all requesters
  Index read_latency = 1;    // cycles from grant to delivery
  Index write_ports = 1;     // result writes accepted per cycle
  Index capacity_words = Index{1} << 34;  // operand entries + result volume

  void validate() const;
};

struct ReadResponse {
  Index offset = 0;
  std::uint64_t tag = 0;
  Entry entry;
};

struct MemoryStats {
  Index requests = 0;
  Index grants = 0;
  Index cancelled = 0;
  Index writes = 0;
  Index max_grants_in_cycle = 0;
  Index max_writes_in_cycle = 0;
  /// Longest time, in arbitration cycles, any requester's oldest pending
  /// request waited before it was granted (1 = granted on first try).
  Index max_head_wait = 0;
};

/// Tensor memory: read-only operand entry arrays, a write-only dense result
/// region preallocated to zero, and a round-robin read arbiter.
///
/// Requesters are numbered 0 .. requester_count-1 (the engine uses two per
/// SDPE). Each requester's requests are granted and delivered in the order
/// they were made. Per cycle the arbiter walks requesters from a rotating
/// pointer, granting one request per pending requester per pass, and makes
/// further passes while bandwidth remains.
class TensorMemory {
 public:
  TensorMemory(const CsfTensor& a, const CsfTensor& b, Shape result_shape, std::size_t requester_count,
               MemoryConfig cfg);

  static std::size_t requester_id(std::size_t sdpe, Operand side) {
    return sdpe * 2 + static_cast<std::size_t>(side);
  }

  /// Starts cycle `cycle`; cycles must be strictly increasing.
  void begin_cycle(Index cycle);

  /// Queues a read for arbitration from the next call to arbitrate() on.
  void request_read(std::size_t requester, Operand side, Index offset, std::uint64_t tag);

  /// Drops the requester's not-yet-granted requests; returns how many.
  std::size_t cancel_pending(std::size_t requester);

  /// Issues this cycle's grants. A grant made in cycle t is delivered in
  /// cycle t + read_latency.
  void arbitrate();

  /// Responses due at or before the current cycle, in request order.
  std::vector<ReadResponse> take_deliveries(std::size_t requester);

  /// Returns false when this cycle's write ports are used up. Writing a
  /// position twice is a SimulationFault.
  bool write_result(Index dest_index, double value);

  std::size_t pending_requesters() const;
  Index cycle() const { return cycle_; }
  const MemoryStats& stats() const { return stats_; }
  const MemoryConfig& config() const { return cfg_; }

  /// Marks the contraction complete; the result may be exported afterwards.
  void finish() { finished_ = true; }
  DenseTensor export_result() const;

  const Shape& result_shape() const { return result_.shape(); }

 private:
  struct Pending {
    Operand side;
    Index offset;
    std::uint64_t tag;
  };
  struct InFlight {
    Index due;
    ReadResponse response;
  };
  struct Port {
    std::deque<Pending> pending;
    std::deque<InFlight> in_flight;
    Index head_since = 0;
  };

  std::span<const Entry> operand(Operand side) const { return side == Operand::A ? a_entries_ : b_entries_; }
  void grant(std::size_t requester);

  std::span<const Entry> a_entries_;
  std::span<const Entry> b_entries_;
  DenseTensor result_;
  std::vector<bool> written_;
  std::vector<Port> ports_;
  MemoryConfig cfg_;
  MemoryStats stats_;
  std::size_t rr_ = 0;
  Index cycle_ = 0;
  bool started_ = false;
  bool arbitrated_ = false;
  Index grants_this_cycle_ = 0;
  Index writes_this_cycle_ = 0;
  bool finished_ = false;
};

}  // namespace flaash
