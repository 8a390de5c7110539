#include "flaash/jobgen.hpp"

#include <stdexcept>
#include <string>

#include "flaash/oracle.hpp"

namespace flaash {

JobPlan plan(const CsfTensor& a, const CsfTensor& b) {
  JobPlan p;
  p.result_shape = result_shape(a.shape(), a.contraction_mode(), b.shape(), b.contraction_mode());
  p.a_fiber_count = a.fiber_offsets().size() - 1;
  p.b_fiber_count = b.fiber_offsets().size() - 1;
  p.job_count = checked_mul(p.a_fiber_count, p.b_fiber_count);
  return p;
}

Job job_for(const JobPlan& p, const CsfTensor& a, const CsfTensor& b, Index job_number) {
  if (job_number >= p.job_count) {
    throw std::out_of_range("job number " + std::to_string(job_number) + " out of range");
  }
  Job j;
  j.job_number = job_number;
  j.a_fiber = job_number / p.b_fiber_count;
  j.b_fiber = job_number % p.b_fiber_count;
  j.a = a.fiber_range(j.a_fiber);
  j.b = b.fiber_range(j.b_fiber);
  j.dest_index = job_number;
  return j;
}

}  // namespace flaash
