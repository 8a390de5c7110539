#pragma once

#include <ranges>

#include "flaash/tensor.hpp"

namespace flaash {

/// One fiber-pair dot product.
///
/// The ranges are entry offsets into each operand's entry array. Every
/// generated job covers whole fibers; a job over a sub-range of the
/// contraction index is representable but never produced.
struct Job {
  Index job_number = 0;
  Index a_fiber = 0;
  Index b_fiber = 0;
  EntryRange a;
  EntryRange b;
  Index dest_index = 0;

  friend bool operator==(const Job&, const Job&) = default;
};

struct JobPlan {
  Index job_count = 0;
  Index a_fiber_count = 0;
  Index b_fiber_count = 0;
  Shape result_shape{1};
};

/// Counts jobs as (A offsets - 1) * (B offsets - 1). Throws
/// std::invalid_argument when the contraction lengths differ.
JobPlan plan(const CsfTensor& a, const CsfTensor& b);

/// Job k pairs A fiber k / b_fiber_count with B fiber k % b_fiber_count and
/// writes to result position k.
Job job_for(const JobPlan& p, const CsfTensor& a, const CsfTensor& b, Index job_number);

/// Lazy, ordered view of jobs 0 .. job_count-1. The tensors must outlive it.
inline auto all_jobs(const JobPlan& p, const CsfTensor& a, const CsfTensor& b) {
  return std::views::iota(Index{0}, p.job_count) |
         std::views::transform([p, &a, &b](Index k) { return job_for(p, a, b, k); });
}

}  // namespace flaash
