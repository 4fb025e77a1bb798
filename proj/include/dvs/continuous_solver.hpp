#ifndef DVS_CONTINUOUS_SOLVER_HPP
#define DVS_CONTINUOUS_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "dvs/model.hpp"
#include "dvs/s_schedule.hpp"
#include "dvs/timeline_map.hpp"

namespace dvs {

// Deadline/arrival orders for a subset, derived from the parent's orders by
// a stable linear pass. No comparison sort happens below the top level.
inline Ranks propagate_ranks(const Ranks& parent,
                             const std::vector<std::uint32_t>& member_positions) {
  std::size_t parent_n = parent.deadline_order.size();
  constexpr std::uint32_t kAbsent = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> child_pos(parent_n, kAbsent);
  for (std::uint32_t c = 0; c < member_positions.size(); ++c) {
    if (member_positions[c] >= parent_n)
      throw std::invalid_argument("member position outside the parent job set");
    if (child_pos[member_positions[c]] != kAbsent)
      throw std::invalid_argument("duplicate member position");
    child_pos[member_positions[c]] = c;
  }
  Ranks child;
  child.deadline_order.reserve(member_positions.size());
  child.arrival_order.reserve(member_positions.size());
  for (std::uint32_t p : parent.deadline_order)
    if (child_pos[p] != kAbsent) child.deadline_order.push_back(child_pos[p]);
  for (std::uint32_t p : parent.arrival_order)
    if (child_pos[p] != kAbsent) child.arrival_order.push_back(child_pos[p]);
  child.arrival_rank.resize(member_positions.size());
  for (std::uint32_t r = 0; r < child.arrival_order.size(); ++r)
    child.arrival_rank[child.arrival_order[r]] = r + 1;
  return child;
}

// A job subset together with its propagated orders.
template <class N>
struct Subproblem {
  JobSet<N> jobs;
  Ranks ranks;
};

template <class N>
Subproblem<N> make_subproblem(const JobSet<N>& jobs) {
  return {jobs, compute_ranks(jobs)};
}

template <class N>
struct PartitionResult {
  // True when the s-schedule completed every job with no idle time inside
  // the support, i.e. the optimum runs the whole subset at constant speed s.
  bool constant_speed = false;
  std::vector<std::uint32_t> high;  // positions with optimal speed >= s
  std::vector<std::uint32_t> low;   // the rest
  // Hull components of the high jobs' windows: exactly the region the high
  // part of the optimum occupies, ready for excision.
  std::vector<Interval<N>> high_region;
};

namespace detail {

template <class N>
N support_length_ordered(const JobSet<N>& jobs, const Ranks& ranks) {
  N total(0);
  bool open = false;
  N lo{}, hi{};
  for (std::uint32_t pos : ranks.arrival_order) {
    const Job<N>& j = jobs[pos];
    if (!open || j.arrival > hi) {
      if (open) total += hi - lo;
      lo = j.arrival;
      hi = j.deadline;
      open = true;
    } else if (j.deadline > hi) {
      hi = j.deadline;
    }
  }
  if (open) total += hi - lo;
  return total;
}

// Classifies a subset against speed s from its s-schedule.
//
// A job is "tight" when it is abandoned at its deadline or finishes exactly
// at it: either way the schedule had no slack left at that moment. Around
// each tight moment t*, take the widest stretch [x, t*) that is busy wall
// to wall and whose executors all have their whole [arrival, deadline]
// inside [x, t*]. Such a stretch runs work confined to it at rate s with
// zero slack, so everything inside needs speed at least s in the optimum;
// nothing else does. Unfinished jobs and jobs confined to the hull of
// already-marked jobs are high as well.
//
// With seeds_only, only unfinished jobs plus hull containment are marked
// (used to name genuinely over-the-top jobs in infeasibility reports).
template <class N>
PartitionResult<N> partition_at_speed(const JobSet<N>& jobs, const N& s,
                                      const SScheduleResult<N>& run,
                                      const Ranks& ranks, bool seeds_only = false) {
  using ar = arith<N>;
  std::size_t n = jobs.size();
  PartitionResult<N> part;

  bool all_finished = run.unfinished.empty();
  if (all_finished) {
    N occupied(0);
    for (const Segment<N>& seg : run.segments) occupied += seg.length();
    if (ar::eq(occupied, support_length_ordered(jobs, ranks))) {
      part.constant_speed = true;
      return part;
    }
  }

  std::unordered_map<JobId, std::uint32_t> pos_of;
  pos_of.reserve(n * 2);
  for (std::uint32_t i = 0; i < n; ++i) pos_of[jobs[i].id] = i;

  std::vector<char> high(n, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    if (ar::gt(run.residuals[i], N(0))) high[i] = 1;

  if (!seeds_only) {
    // Tight moments: deadlines of abandoned jobs and of jobs finishing
    // exactly at their deadline.
    const auto& segs = run.segments;
    std::vector<N> last_end(n, N(0));
    std::vector<char> executed(n, 0);
    for (const Segment<N>& seg : segs) {
      std::uint32_t p = pos_of.at(seg.job);
      executed[p] = 1;
      if (seg.end > last_end[p]) last_end[p] = seg.end;
    }
    std::vector<N> tight;
    for (std::uint32_t i = 0; i < n; ++i)
      if (high[i] || (executed[i] && ar::eq(last_end[i], jobs[i].deadline)))
        tight.push_back(jobs[i].deadline);

    // Maximal busy stretches with the range of raw segments they cover.
    struct BusyRun {
      N start;
      N end;
      std::size_t seg_begin;
      std::size_t seg_end;
      std::vector<N> tight_moments;
    };
    std::vector<BusyRun> runs;
    {
      std::size_t i = 0;
      while (i < segs.size()) {
        BusyRun r{segs[i].start, segs[i].end, i, i + 1, {}};
        std::size_t k = i + 1;
        while (k < segs.size() && ar::eq(segs[k].start, r.end)) {
          r.end = segs[k].end;
          ++k;
        }
        r.seg_end = k;
        runs.push_back(std::move(r));
        i = k;
      }
    }

    // Attribute each tight moment to its busy stretch (the processor is
    // never idle while a tight job is alive and unfinished).
    for (const N& b : tight) {
      std::size_t lo = 0, hi = runs.size();
      while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (ar::gt(b, runs[mid].end))
          lo = mid + 1;
        else
          hi = mid;
      }
      if (lo == runs.size() || !ar::gt(b, runs[lo].start)) continue;
      runs[lo].tight_moments.push_back(b);
    }

    // Widest self-contained window ending at each tight moment, walking
    // segments right to left. A later moment's window covers any earlier
    // moment inside it, so the walks never revisit a segment.
    for (BusyRun& r : runs) {
      if (r.tight_moments.empty()) continue;
      std::sort(r.tight_moments.begin(), r.tight_moments.end(), std::greater<N>());
      N covered_from = r.end;
      bool covered_any = false;
      for (const N& moment : r.tight_moments) {
        if (covered_any && ar::gt(moment, covered_from)) continue;
        // Last segment starting before the tight moment.
        std::size_t lo = r.seg_begin, hi = r.seg_end;
        while (lo < hi) {
          std::size_t mid = (lo + hi) / 2;
          if (ar::lt(segs[mid].start, moment))
            lo = mid + 1;
          else
            hi = mid;
        }
        if (lo == r.seg_begin) continue;
        std::size_t top = lo;  // candidate window covers segments [cut_idx, top)
        N arrival_min = moment;
        bool valid = false;
        N cut = moment;
        std::size_t cut_idx = top;
        for (std::size_t k = top; k-- > r.seg_begin;) {
          std::uint32_t p = pos_of.at(segs[k].job);
          if (ar::gt(jobs[p].deadline, moment)) break;
          if (jobs[p].arrival < arrival_min) arrival_min = jobs[p].arrival;
          if (ar::ge(arrival_min, segs[k].start)) {
            valid = true;
            cut = segs[k].start;
            cut_idx = k;
          }
        }
        if (!valid) continue;
        for (std::size_t k = cut_idx; k < top; ++k) {
          std::uint32_t p = pos_of.at(segs[k].job);
          if (ar::ge(jobs[p].arrival, cut) && ar::le(jobs[p].deadline, moment))
            high[p] = 1;
        }
        covered_from = cut;
        covered_any = true;
      }
    }
  }

  // Hull components of the marked jobs' windows, then containment closure.
  std::vector<Interval<N>> hulls;
  for (std::uint32_t pos : ranks.arrival_order) {
    if (!high[pos]) continue;
    const Job<N>& j = jobs[pos];
    if (!hulls.empty() && j.arrival <= hulls.back().hi)
      hulls.back().hi = std::max(hulls.back().hi, j.deadline);
    else
      hulls.push_back({j.arrival, j.deadline});
  }
  std::size_t h = 0;
  for (std::uint32_t pos : ranks.arrival_order) {
    const Job<N>& j = jobs[pos];
    while (h + 1 < hulls.size() && hulls[h + 1].lo <= j.arrival) ++h;
    if (!hulls.empty() && hulls[h].lo <= j.arrival && j.deadline <= hulls[h].hi)
      high[pos] = 1;
  }

  for (std::uint32_t p = 0; p < n; ++p)
    (high[p] ? part.high : part.low).push_back(p);
  part.high_region = std::move(hulls);
  return part;
}

}  // namespace detail

// Splits a subset into the jobs whose optimal speed is at least s and the
// rest, from one s-schedule run. When the optimum is constant at s, no
// partition is emitted and constant_speed is set instead.
template <class N>
PartitionResult<N> bipartition(const Subproblem<N>& sub, const N& s,
                               const SScheduleResult<N>& run) {
  if (run.job_ids.size() != sub.jobs.size())
    throw std::invalid_argument("s-schedule result does not match the subproblem");
  for (std::size_t i = 0; i < sub.jobs.size(); ++i)
    if (run.job_ids[i] != sub.jobs[i].id)
      throw std::invalid_argument("s-schedule result does not match the subproblem");
  return detail::partition_at_speed(sub.jobs, s, run, sub.ranks);
}

struct SolveStats {
  std::uint64_t sschedule_calls = 0;
  std::uint64_t comparison_sorts = 0;
  std::uint64_t partition_nodes = 0;
  std::uint64_t unions = 0;
  std::uint64_t finds = 0;
  std::size_t max_depth = 0;
};

template <class N>
struct SolveHooks {
  // Observes every recursion node that actually partitions: the node's job
  // set, the tested speed, and the resulting high/low id sets.
  std::function<void(const JobSet<N>&, const N&, const std::vector<JobId>&,
                     const std::vector<JobId>&)>
      on_partition;
};

template <class N>
struct SolveResult {
  Schedule<N> schedule;
  std::map<JobId, N> job_speed;
  SolveStats stats;

  N total_energy(const EnergyParams& params) const { return energy(schedule, params); }
};

namespace detail {

template <class N>
class ContinuousSolver {
 public:
  ContinuousSolver(SolveResult<N>& result, const SolveHooks<N>* hooks)
      : result_(result), hooks_(hooks) {}

  std::vector<Segment<N>> run(const JobSet<N>& jobs, const Ranks& ranks,
                              std::size_t depth) {
    result_.stats.max_depth = std::max(result_.stats.max_depth, depth);
    std::vector<Segment<N>> segments;
    std::size_t n = jobs.size();
    if (n == 0) return segments;
    if (n == 1) {
      const Job<N>& j = jobs[0];
      N speed = j.workload / (j.deadline - j.arrival);
      result_.job_speed[j.id] = speed;
      segments.push_back({j.arrival, j.deadline, speed, j.id});
      return segments;
    }

    N s = jobs.total_workload() / support_length_ordered(jobs, ranks);
    ++result_.stats.sschedule_calls;
    SScheduleResult<N> sched = s_schedule(jobs, s, ranks);
    result_.stats.unions += sched.stats.unions;
    result_.stats.finds += sched.stats.finds;
    PartitionResult<N> part = partition_at_speed(jobs, s, sched, ranks);

    if (part.constant_speed) {
      for (const Job<N>& j : jobs.jobs()) result_.job_speed[j.id] = s;
      return coalesce_segments(sched.segments);
    }

    ++result_.stats.partition_nodes;
    if (part.high.empty() || part.low.empty())
      throw std::logic_error("bipartition produced an empty side on a non-constant instance");
    if (hooks_ && hooks_->on_partition) {
      std::vector<JobId> high_ids, low_ids;
      for (std::uint32_t p : part.high) high_ids.push_back(jobs[p].id);
      for (std::uint32_t p : part.low) low_ids.push_back(jobs[p].id);
      hooks_->on_partition(jobs, s, high_ids, low_ids);
    }

    // High side keeps this node's timeline.
    std::vector<Job<N>> high_jobs;
    high_jobs.reserve(part.high.size());
    for (std::uint32_t p : part.high) high_jobs.push_back(jobs[p]);
    Ranks high_ranks = propagate_ranks(ranks, part.high);
    std::vector<Segment<N>> high_segs = run(JobSet<N>(std::move(high_jobs)), high_ranks, depth + 1);

    // Low side lives on the timeline with the high region cut out.
    TimelineMap<N> excision(part.high_region);
    std::vector<Job<N>> low_jobs;
    low_jobs.reserve(part.low.size());
    for (std::uint32_t p : part.low) {
      Job<N> j = jobs[p];
      j.arrival = excision.to_compressed(j.arrival);
      j.deadline = excision.to_compressed(j.deadline);
      low_jobs.push_back(std::move(j));
    }
    Ranks low_ranks = propagate_ranks(ranks, part.low);
    std::vector<Segment<N>> low_segs = run(JobSet<N>(std::move(low_jobs)), low_ranks, depth + 1);

    segments = std::move(high_segs);
    for (const Segment<N>& seg : low_segs) excision.map_segment_to_parent(seg, segments);
    return segments;
  }

 private:
  SolveResult<N>& result_;
  const SolveHooks<N>* hooks_;
};

// Entry point that reuses already-computed ranks (the discrete solver's
// groups come through here so only the top level ever comparison-sorts).
template <class N>
std::vector<Segment<N>> solve_core(const JobSet<N>& jobs, const Ranks& ranks,
                                   SolveResult<N>& result, const SolveHooks<N>* hooks) {
  ContinuousSolver<N> solver(result, hooks);
  return solver.run(jobs, ranks, 0);
}

}  // namespace detail

// Minimum-energy continuous schedule via recursive average-rate bipartition.
// Matches the critical-interval reference solver job for job; performs at
// most n s-schedule calls per top-level invocation.
template <class N>
SolveResult<N> solve(const JobSet<N>& jobset, const SolveHooks<N>* hooks = nullptr) {
  SolveResult<N> result;
  std::vector<Job<N>> active;
  active.reserve(jobset.size());
  for (const Job<N>& j : jobset.jobs()) {
    if (j.workload > N(0))
      active.push_back(j);
    else
      result.job_speed[j.id] = N(0);
  }
  if (active.empty()) return result;

  JobSet<N> core(std::move(active));
  ++result.stats.comparison_sorts;
  Ranks ranks = compute_ranks(core);
  std::vector<Segment<N>> segments = detail::solve_core(core, ranks, result, hooks);
  result.schedule.segments = coalesce_segments(std::move(segments));
  return result;
}

}  // namespace dvs

#endif  // DVS_CONTINUOUS_SOLVER_HPP
