#include "flaash/memory.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace flaash {

void MemoryConfig::validate() const {
  if (read_bandwidth < 1 || read_latency < 1 || write_ports < 1) {
    throw std::invalid_argument("memory bandwidth, latency and write ports must all be >= 1");
  }
}

TensorMemory::TensorMemory(const CsfTensor& a, const CsfTensor& b, Shape result_shape,
                           std::size_t requester_count, MemoryConfig cfg)
    : a_entries_(a.entries()),
      b_entries_(b.entries()),
      result_(std::move(result_shape)),
      written_(result_.shape().volume(), false),
      ports_(requester_count),
      cfg_(cfg) {
  cfg_.validate();
  const Index words = a.nnz() + b.nnz() + result_.shape().volume();
  if (words > cfg_.capacity_words) {
    throw std::length_error("operands and result (" + std::to_string(words) +
                            " words) exceed tensor memory capacity");
  }
}

void TensorMemory::begin_cycle(Index cycle) {
  if (started_ && cycle <= cycle_) {
    throw SimulationFault("memory cycles must increase");
  }
  started_ = true;
  cycle_ = cycle;
  grants_this_cycle_ = 0;
  writes_this_cycle_ = 0;
  arbitrated_ = false;
}

void TensorMemory::request_read(std::size_t requester, Operand side, Index offset, std::uint64_t tag) {
  if (requester >= ports_.size()) {
    throw SimulationFault("unknown requester " + std::to_string(requester));
  }
  if (offset >= operand(side).size()) {
    throw SimulationFault("read offset " + std::to_string(offset) + " beyond operand entries");
  }
  Port& port = ports_[requester];
  if (port.pending.empty()) port.head_since = cycle_ + (arbitrated_ ? 1 : 0);
  port.pending.push_back({side, offset, tag});
  ++stats_.requests;
}

std::size_t TensorMemory::cancel_pending(std::size_t requester) {
  Port& port = ports_.at(requester);
  const std::size_t n = port.pending.size();
  port.pending.clear();
  stats_.cancelled += n;
  return n;
}

void TensorMemory::grant(std::size_t requester) {
  Port& port = ports_[requester];
  const Pending req = port.pending.front();
  port.pending.pop_front();
  const Index wait = cycle_ >= port.head_since ? cycle_ - port.head_since + 1 : 1;
  stats_.max_head_wait = std::max(stats_.max_head_wait, wait);
  port.head_since = cycle_ + 1;
  port.in_flight.push_back({cycle_ + cfg_.read_latency, {req.offset, req.tag, operand(req.side)[req.offset]}});
  ++stats_.grants;
  ++grants_this_cycle_;
}

void TensorMemory::arbitrate() {
  const std::size_t n = ports_.size();
  if (n == 0) return;
  arbitrated_ = true;
  std::size_t start = rr_;
  while (grants_this_cycle_ < cfg_.read_bandwidth) {
    bool granted_any = false;
    for (std::size_t k = 0; k < n && grants_this_cycle_ < cfg_.read_bandwidth; ++k) {
      const std::size_t r = (start + k) % n;
      if (ports_[r].pending.empty()) continue;
      grant(r);
      granted_any = true;
      rr_ = (r + 1) % n;
    }
    if (!granted_any) break;
    start = rr_;
  }
  stats_.max_grants_in_cycle = std::max(stats_.max_grants_in_cycle, grants_this_cycle_);
}

std::vector<ReadResponse> TensorMemory::take_deliveries(std::size_t requester) {
  Port& port = ports_.at(requester);
  std::vector<ReadResponse> out;
  while (!port.in_flight.empty() && port.in_flight.front().due <= cycle_) {
    out.push_back(port.in_flight.front().response);
    port.in_flight.pop_front();
  }
  return out;
}

bool TensorMemory::write_result(Index dest_index, double value) {
  if (finished_) throw SimulationFault("result write after completion");
  if (dest_index >= written_.size()) {
    throw SimulationFault("result destination " + std::to_string(dest_index) + " out of range");
  }
  if (written_[dest_index]) {
    throw SimulationFault("duplicate result write to " + std::to_string(dest_index));
  }
  if (writes_this_cycle_ >= cfg_.write_ports) return false;
  written_[dest_index] = true;
  result_[dest_index] = value;
  ++writes_this_cycle_;
  ++stats_.writes;
  stats_.max_writes_in_cycle = std::max(stats_.max_writes_in_cycle, writes_this_cycle_);
  return true;
}

std::size_t TensorMemory::pending_requesters() const {
  return static_cast<std::size_t>(
      std::count_if(ports_.begin(), ports_.end(), [](const Port& p) { return !p.pending.empty(); }));
}

DenseTensor TensorMemory::export_result() const {
  if (!finished_) throw SimulationFault("result exported before the contraction finished");
  return result_;
}

}  // namespace flaash
