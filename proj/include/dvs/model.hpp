#ifndef DVS_MODEL_HPP
#define DVS_MODEL_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dvs/numeric.hpp"

namespace dvs {

using JobId = std::int64_t;
inline constexpr JobId kIdleJob = -1;

template <class N>
struct Interval {
  N lo;
  N hi;

  N length() const { return hi - lo; }
};

// One job of a scheduling instance: must receive `workload` units of work
// between `arrival` and `deadline`.
template <class N>
struct Job {
  JobId id = 0;
  N arrival{};
  N deadline{};
  N workload{};

  Interval<N> interval() const { return {arrival, deadline}; }
};

template <class N>
class JobSet {
 public:
  JobSet() = default;

  explicit JobSet(std::vector<Job<N>> jobs) : jobs_(std::move(jobs)) {
    std::set<JobId> seen;
    for (const Job<N>& j : jobs_) {
      if (!(j.arrival < j.deadline))
        throw std::invalid_argument("job " + std::to_string(j.id) +
                                    ": arrival must be before deadline");
      if (j.workload < N(0))
        throw std::invalid_argument("job " + std::to_string(j.id) +
                                    ": workload must be nonnegative");
      if (!seen.insert(j.id).second)
        throw std::invalid_argument("duplicate job id " + std::to_string(j.id));
    }
  }

  const std::vector<Job<N>>& jobs() const { return jobs_; }
  std::size_t size() const { return jobs_.size(); }
  bool empty() const { return jobs_.empty(); }
  const Job<N>& operator[](std::size_t i) const { return jobs_[i]; }

  // Smallest interval containing every job interval; {0, 0} when empty.
  Interval<N> horizon() const {
    if (jobs_.empty()) return {N(0), N(0)};
    N lo = jobs_[0].arrival, hi = jobs_[0].deadline;
    for (const Job<N>& j : jobs_) {
      lo = std::min(lo, j.arrival);
      hi = std::max(hi, j.deadline);
    }
    return {lo, hi};
  }

  N total_workload() const {
    N sum(0);
    for (const Job<N>& j : jobs_) sum += j.workload;
    return sum;
  }

 private:
  std::vector<Job<N>> jobs_;
};

// A maximal stretch of time devoted to one job (or to idling) at one speed.
template <class N>
struct Segment {
  N start{};
  N end{};
  N speed{};
  JobId job = kIdleJob;

  N length() const { return end - start; }
  N work() const { return speed * (end - start); }
  bool idle() const { return job == kIdleJob; }
};

// Piecewise-constant speed profile with job assignment. Segments are kept in
// time order; idle time may be represented implicitly as gaps.
template <class N>
struct Schedule {
  std::vector<Segment<N>> segments;

  N total_work() const {
    N sum(0);
    for (const Segment<N>& s : segments)
      if (!s.idle()) sum += s.work();
    return sum;
  }
};

// Merges adjacent segments that continue the same job at the same speed.
template <class N>
std::vector<Segment<N>> coalesce_segments(std::vector<Segment<N>> segs) {
  std::sort(segs.begin(), segs.end(), [](const Segment<N>& a, const Segment<N>& b) {
    return a.start < b.start || (a.start == b.start && a.end < b.end);
  });
  std::vector<Segment<N>> out;
  for (const Segment<N>& s : segs) {
    if (!arith<N>::lt(s.start, s.end)) continue;
    if (!out.empty() && out.back().job == s.job && out.back().speed == s.speed &&
        arith<N>::eq(out.back().end, s.start)) {
      out.back().end = s.end;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

// Exponent of the power function P(s) = s^alpha.
class EnergyParams {
 public:
  explicit EnergyParams(double alpha = 3.0) : alpha_(alpha) {
    if (!(alpha >= 2.0))
      throw std::invalid_argument("power exponent alpha must be at least 2");
  }

  double alpha() const { return alpha_; }
  bool integral() const { return alpha_ == static_cast<double>(static_cast<long>(alpha_)); }
  unsigned long alpha_int() const { return static_cast<unsigned long>(alpha_); }

 private:
  double alpha_;
};

namespace detail {
inline Rational pow_speed(const Rational& s, const EnergyParams& p) {
  if (!p.integral())
    throw std::invalid_argument("exact energy needs an integer alpha");
  return pow_int(s, p.alpha_int());
}
inline double pow_speed(double s, const EnergyParams& p) {
  return std::pow(s, p.alpha());
}
}  // namespace detail

// Total energy of a schedule: sum of speed^alpha * duration over non-idle
// segments.
template <class N>
N energy(const Schedule<N>& schedule, const EnergyParams& params) {
  N total(0);
  for (const Segment<N>& s : schedule.segments) {
    if (s.idle()) continue;
    total += detail::pow_speed(s.speed, params) * s.length();
  }
  return total;
}

// Intensity of an interval: total workload of jobs fully contained in it,
// divided by its length.
template <class N>
N intensity(const JobSet<N>& jobset, const Interval<N>& interval) {
  if (!(interval.lo < interval.hi))
    throw std::invalid_argument("intensity needs an interval of positive length");
  N work(0);
  for (const Job<N>& j : jobset.jobs())
    if (interval.lo <= j.arrival && j.deadline <= interval.hi) work += j.workload;
  return work / interval.length();
}

// Union of all job intervals as maximal disjoint intervals ordered by start.
template <class N>
std::vector<Interval<N>> support(const JobSet<N>& jobset) {
  std::vector<Interval<N>> spans;
  spans.reserve(jobset.size());
  for (const Job<N>& j : jobset.jobs()) spans.push_back(j.interval());
  std::sort(spans.begin(), spans.end(), [](const Interval<N>& a, const Interval<N>& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval<N>> merged;
  for (const Interval<N>& s : spans) {
    if (!merged.empty() && s.lo <= merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, s.hi);
    else
      merged.push_back(s);
  }
  return merged;
}

template <class N>
N support_length(const JobSet<N>& jobset) {
  N total(0);
  for (const Interval<N>& s : support(jobset)) total += s.length();
  return total;
}

// Average rate: total workload divided by the length of the support.
template <class N>
N avr(const JobSet<N>& jobset) {
  if (jobset.empty())
    throw std::invalid_argument("average rate of an empty job set is undefined");
  return jobset.total_workload() / support_length(jobset);
}

enum class ViolationKind {
  kOverlap,
  kOutsideWindow,
  kWorkMismatch,
  kNegativeSpeed,
  kUnknownJob,
  kBadIdleSpeed,
};

struct Violation {
  ViolationKind kind;
  JobId job = kIdleJob;
  std::string message;
};

struct Verdict {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks a schedule against an instance: non-overlapping segments, every
// job's work delivered inside its window, nonnegative speeds. Collects all
// violations instead of stopping at the first.
template <class N>
Verdict verify_feasible(const Schedule<N>& schedule, const JobSet<N>& jobset) {
  using ar = arith<N>;
  Verdict verdict;
  auto report = [&](ViolationKind kind, JobId job, std::string msg) {
    verdict.violations.push_back({kind, job, std::move(msg)});
  };

  std::map<JobId, const Job<N>*> by_id;
  for (const Job<N>& j : jobset.jobs()) by_id[j.id] = &j;

  std::vector<Segment<N>> segs = schedule.segments;
  std::sort(segs.begin(), segs.end(), [](const Segment<N>& a, const Segment<N>& b) {
    return a.start < b.start;
  });

  std::map<JobId, N> delivered;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Segment<N>& s = segs[i];
    if (!(s.start < s.end)) {
      report(ViolationKind::kOutsideWindow, s.job, "segment has nonpositive length");
      continue;
    }
    if (s.speed < N(0))
      report(ViolationKind::kNegativeSpeed, s.job, "segment speed is negative");
    if (s.idle()) {
      if (!ar::is_zero(s.speed))
        report(ViolationKind::kBadIdleSpeed, s.job, "idle segment with nonzero speed");
      continue;
    }
    if (ar::is_zero(s.speed))
      report(ViolationKind::kBadIdleSpeed, s.job,
             "zero-speed segment assigned to job " + std::to_string(s.job));
    if (i + 1 < segs.size() && ar::lt(segs[i + 1].start, s.end))
      report(ViolationKind::kOverlap, s.job, "segments overlap in time");
    auto it = by_id.find(s.job);
    if (it == by_id.end()) {
      report(ViolationKind::kUnknownJob, s.job,
             "segment references unknown job " + std::to_string(s.job));
      continue;
    }
    const Job<N>& j = *it->second;
    if (ar::lt(s.start, j.arrival) || ar::gt(s.end, j.deadline))
      report(ViolationKind::kOutsideWindow, s.job,
             "job " + std::to_string(s.job) + " executes outside [arrival, deadline]");
    delivered[s.job] += s.work();
  }

  for (const Job<N>& j : jobset.jobs()) {
    N got = delivered.count(j.id) ? delivered[j.id] : N(0);
    if (!ar::eq(got, j.workload))
      report(ViolationKind::kWorkMismatch, j.id,
             "job " + std::to_string(j.id) + " delivered " + num_to_string(got) +
                 " of " + num_to_string(j.workload) + " work units");
  }
  return verdict;
}

}  // namespace dvs

#endif  // DVS_MODEL_HPP
