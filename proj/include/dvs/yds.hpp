#ifndef DVS_YDS_HPP
#define DVS_YDS_HPP

#include <algorithm>
#include <map>
#include <queue>
#include <vector>

#include "dvs/model.hpp"
#include "dvs/timeline_map.hpp"

namespace dvs {

template <class N>
struct CriticalInterval {
  Interval<N> interval;
  N speed{};
  std::vector<JobId> jobs;  // ids of the contained jobs, ascending
};

// Scans every candidate interval [arrival, deadline] and returns one of
// maximum intensity. Ties resolve to the smallest start, then the largest
// length, so repeated runs are reproducible.
template <class N>
CriticalInterval<N> find_critical_interval(const JobSet<N>& jobset) {
  if (jobset.empty())
    throw std::invalid_argument("critical interval of an empty job set is undefined");

  std::vector<const Job<N>*> by_deadline;
  by_deadline.reserve(jobset.size());
  for (const Job<N>& j : jobset.jobs()) by_deadline.push_back(&j);
  std::sort(by_deadline.begin(), by_deadline.end(),
            [](const Job<N>* a, const Job<N>* b) { return a->deadline < b->deadline; });

  std::vector<N> starts;
  starts.reserve(jobset.size());
  for (const Job<N>& j : jobset.jobs()) starts.push_back(j.arrival);
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

  bool have_best = false;
  N best_g(0);
  Interval<N> best{N(0), N(0)};
  for (const N& a : starts) {
    N work(0);
    for (std::size_t i = 0; i < by_deadline.size(); ++i) {
      const Job<N>& j = *by_deadline[i];
      if (j.arrival >= a) work += j.workload;
      // Candidate closes at each distinct deadline value.
      if (i + 1 < by_deadline.size() && by_deadline[i + 1]->deadline == j.deadline)
        continue;
      const N& b = j.deadline;
      if (!(a < b)) continue;
      N g = work / (b - a);
      if (!have_best || g > best_g ||
          (g == best_g && (a < best.lo || (a == best.lo && b > best.hi)))) {
        have_best = true;
        best_g = g;
        best = {a, b};
      }
    }
  }
  CriticalInterval<N> result;
  result.interval = best;
  result.speed = best_g;
  for (const Job<N>& j : jobset.jobs())
    if (best.lo <= j.arrival && j.deadline <= best.hi) result.jobs.push_back(j.id);
  std::sort(result.jobs.begin(), result.jobs.end());
  return result;
}

namespace detail {

// Event-driven EDF packing of a feasible group at one constant speed.
// Independent of the canonical-grid scheduler; used only by the reference
// solver, which never hands it an infeasible group.
template <class N>
void pack_edf(std::vector<Job<N>> jobs, const N& start, const N& speed,
              std::vector<Segment<N>>& out) {
  std::sort(jobs.begin(), jobs.end(), [](const Job<N>& a, const Job<N>& b) {
    return a.arrival < b.arrival || (a.arrival == b.arrival && a.id < b.id);
  });
  struct Active {
    N deadline;
    JobId id;
    N remaining;
    bool operator>(const Active& o) const {
      return deadline > o.deadline || (deadline == o.deadline && id > o.id);
    }
  };
  std::priority_queue<Active, std::vector<Active>, std::greater<Active>> ready;
  std::size_t next = 0;
  N now = start;
  while (next < jobs.size() || !ready.empty()) {
    if (ready.empty()) {
      now = std::max(now, jobs[next].arrival);
    }
    while (next < jobs.size() && jobs[next].arrival <= now) {
      if (jobs[next].workload > N(0))
        ready.push({jobs[next].deadline, jobs[next].id, jobs[next].workload});
      ++next;
    }
    if (ready.empty()) continue;
    Active run = ready.top();
    ready.pop();
    N finish = now + run.remaining / speed;
    N until = finish;
    if (next < jobs.size() && jobs[next].arrival < until) until = jobs[next].arrival;
    if (now < until) {
      out.push_back({now, until, speed, run.id});
      run.remaining -= speed * (until - now);
      now = until;
    }
    if (arith<N>::gt(run.remaining, N(0)))
      ready.push(run);
    else if (arith<N>::gt(now, run.deadline))
      throw std::logic_error("reference packer overran a deadline");
  }
}

}  // namespace detail

template <class N>
struct MesResult {
  Schedule<N> schedule;
  std::map<JobId, N> job_speed;
  std::vector<CriticalInterval<N>> levels;  // extraction order; intervals span
                                            // original coordinates

  N total_energy(const EnergyParams& params) const { return energy(schedule, params); }
};

// Critical-interval extraction: repeatedly peel the maximum-intensity
// interval, schedule its jobs there by EDF at that intensity, collapse the
// interval out of the timeline, and recurse on the rest. Quadratic per
// round; intended as the correctness baseline, not the fast path.
template <class N>
MesResult<N> mes_schedule(const JobSet<N>& jobset) {
  MesResult<N> result;
  std::vector<Job<N>> working;
  working.reserve(jobset.size());
  for (const Job<N>& j : jobset.jobs()) {
    if (j.workload > N(0))
      working.push_back(j);
    else
      result.job_speed[j.id] = N(0);
  }

  TimelineMap<N> to_original;
  std::vector<Segment<N>> segments;
  while (!working.empty()) {
    JobSet<N> current(working);
    CriticalInterval<N> level = find_critical_interval(current);

    std::vector<Job<N>> members;
    std::vector<Job<N>> rest;
    for (Job<N>& j : working) {
      if (level.interval.lo <= j.arrival && j.deadline <= level.interval.hi)
        members.push_back(j);
      else
        rest.push_back(j);
    }

    std::vector<Segment<N>> packed;
    detail::pack_edf(members, level.interval.lo, level.speed, packed);
    for (const Segment<N>& s : packed) to_original.map_segment_to_parent(s, segments);
    for (const Job<N>& j : members) result.job_speed[j.id] = level.speed;

    CriticalInterval<N> reported = level;
    reported.interval = {to_original.to_parent(level.interval.lo),
                         to_original.to_parent(level.interval.hi)};
    result.levels.push_back(std::move(reported));

    to_original.excise_compressed(level.interval);
    const N& lo = level.interval.lo;
    const N& hi = level.interval.hi;
    N len = hi - lo;
    for (Job<N>& j : rest) {
      if (j.arrival > lo) j.arrival = j.arrival > hi ? j.arrival - len : lo;
      if (j.deadline > lo) j.deadline = j.deadline > hi ? j.deadline - len : lo;
    }
    working = std::move(rest);
  }

  result.schedule.segments = coalesce_segments(std::move(segments));
  return result;
}

}  // namespace dvs

#endif  // DVS_YDS_HPP
