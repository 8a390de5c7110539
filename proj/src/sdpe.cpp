#include "flaash/sdpe.hpp"

#include <stdexcept>
#include <string>

namespace flaash {

void FiberLoader::arm(EntryRange range, std::uint64_t tag) {
  fifo_.clear();
  cursor_ = range.begin;
  end_ = range.end;
  tag_ = tag;
  outstanding_current_ = 0;
}

void FiberLoader::disarm() {
  fifo_.clear();
  cursor_ = end_;
  outstanding_current_ = 0;
  // Job tags start at 1, so in-flight entries for the old job no longer match.
  tag_ = 0;
}

std::optional<Index> FiberLoader::next_request() {
  if (cursor_ >= end_ || fifo_.size() + outstanding_current_ >= depth_) return std::nullopt;
  const Index offset = cursor_++;
  outstanding_.push_back({tag_, offset});
  ++outstanding_current_;
  return offset;
}

void FiberLoader::accept(const ReadResponse& r) {
  if (outstanding_.empty() || outstanding_.front().offset != r.offset || outstanding_.front().tag != r.tag) {
    throw SimulationFault("fiber loader received a grant for offset " + std::to_string(r.offset) +
                          " it did not request");
  }
  outstanding_.pop_front();
  ++received_;
  if (r.tag != tag_) {
    ++stale_;
    return;
  }
  --outstanding_current_;
  fifo_.push_back(r.entry);
}

void FiberLoader::retract(std::size_t n) {
  if (n > outstanding_.size()) throw SimulationFault("retracting more requests than outstanding");
  for (std::size_t k = 0; k < n; ++k) {
    const Outstanding& last = outstanding_.back();
    if (last.tag == tag_) {
      --outstanding_current_;
      cursor_ = last.offset;
    }
    outstanding_.pop_back();
  }
}

Sdpe::Sdpe(SdpeConfig cfg) : cfg_(cfg), loader_a_(cfg.fifo_depth), loader_b_(cfg.fifo_depth) {
  if (cfg_.fifo_depth < 1 || cfg_.result_queue_depth < 1) {
    throw std::invalid_argument("SDPE FIFO and result queue depths must be >= 1");
  }
}

bool Sdpe::assign_job(const Job& job) {
  if (slot_) return false;
  slot_ = job;
  return true;
}

void Sdpe::promote() {
  active_ = *slot_;
  slot_.reset();
  ++tag_;
  loader_a_.arm(active_->a, tag_);
  loader_b_.arm(active_->b, tag_);
  accumulator_ = 0.0;
  job_intersect_cycles_ = 0;
}

bool Sdpe::try_retire(StepOutput& out) {
  if (!(loader_a_.exhausted() || loader_b_.exhausted())) return false;
  if (accumulator_ != 0.0) {
    if (results_.size() >= cfg_.result_queue_depth) {
      ++counters_.result_stall_cycles;
      return true;
    }
    results_.push_back({active_->dest_index, accumulator_});
    out.completed_result = results_.back();
    ++counters_.results_emitted;
  } else {
    ++counters_.zero_results_dropped;
  }
  ++job_intersect_cycles_;
  last_job_intersect_cycles_ = job_intersect_cycles_;
  ++counters_.jobs_completed;
  loader_a_.disarm();
  loader_b_.disarm();
  active_.reset();
  out.job_completed = true;
  return true;
}

Sdpe::StepOutput Sdpe::step(std::span<const ReadResponse> granted_a, std::span<const ReadResponse> granted_b) {
  StepOutput out;
  if (!active_ && slot_) promote();

  if (active_) {
    ++counters_.busy_cycles;
    for (Operand side : {Operand::A, Operand::B}) {
      if (auto offset = loader(side).next_request()) {
        out.requests.push_back({side, *offset, tag_});
        ++counters_.requests_issued;
      }
    }
  } else {
    ++counters_.idle_cycles;
  }

  for (const ReadResponse& r : granted_a) loader_a_.accept(r);
  for (const ReadResponse& r : granted_b) loader_b_.accept(r);

  if (!active_ || try_retire(out)) return out;

  const Entry* a = loader_a_.head();
  const Entry* b = loader_b_.head();
  if (a == nullptr || b == nullptr) {
    ++counters_.data_stall_cycles;
    return out;
  }
  ++counters_.comparisons;
  ++job_intersect_cycles_;
  if (a->index == b->index) {
    accumulator_ += a->value * b->value;
    ++counters_.mac_count;
    loader_a_.pop();
    loader_b_.pop();
  } else if (a->index > b->index) {
    loader_b_.pop();
  } else {
    loader_a_.pop();
  }
  return out;
}

std::optional<ResultRecord> Sdpe::pop_result() {
  if (results_.empty()) return std::nullopt;
  ResultRecord r = results_.front();
  results_.pop_front();
  return r;
}

}  // namespace flaash
