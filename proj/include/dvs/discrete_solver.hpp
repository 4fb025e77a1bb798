#ifndef DVS_DISCRETE_SOLVER_HPP
#define DVS_DISCRETE_SOLVER_HPP

#include <optional>
#include <utility>
#include <vector>

#include "dvs/continuous_solver.hpp"
#include "dvs/model.hpp"

namespace dvs {

// Strictly increasing positive speed levels s_1 < ... < s_d.
template <class N>
class SpeedLadder {
 public:
  explicit SpeedLadder(std::vector<N> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw std::invalid_argument("speed ladder must be non-empty");
    if (!(levels_[0] > N(0)))
      throw std::invalid_argument("speed levels must be positive");
    for (std::size_t i = 1; i < levels_.size(); ++i)
      if (!(levels_[i - 1] < levels_[i]))
        throw std::invalid_argument("speed levels must be strictly increasing");
  }

  std::size_t size() const { return levels_.size(); }
  const N& level(std::size_t i) const { return levels_.at(i - 1); }  // 1-based
  const std::vector<N>& levels() const { return levels_; }

 private:
  std::vector<N> levels_;
};

// Bracket of one job's continuous-optimal speed: `lower` = i means the speed
// lies in [s_i, s_{i+1}) (1-based); i = d means exactly s_d; no value means
// the speed is below s_1.
struct SpeedBracket {
  JobId job = 0;
  std::optional<std::size_t> lower;
};

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string message, std::vector<JobId> violating)
      : std::runtime_error(std::move(message)), jobs(std::move(violating)) {}

  std::vector<JobId> jobs;
};

// Unique durations (t_lo, t_hi) with t_lo + t_hi = interval_length and
// s_lo*t_lo + s_hi*t_hi = work.
template <class N>
std::pair<N, N> two_speed_round(const N& interval_length, const N& work,
                                const N& s_lo, const N& s_hi) {
  using ar = arith<N>;
  if (!(s_lo < s_hi)) throw std::invalid_argument("two_speed_round: s_lo must be below s_hi");
  if (!(interval_length > N(0)))
    throw std::invalid_argument("two_speed_round: interval length must be positive");
  if (!ar::le(s_lo * interval_length, work) || !ar::le(work, s_hi * interval_length))
    throw std::invalid_argument(
        "two_speed_round: work/length must lie between the two speeds");
  N t_hi = (work - s_lo * interval_length) / (s_hi - s_lo);
  if (t_hi < N(0)) t_hi = N(0);
  if (t_hi > interval_length) t_hi = interval_length;
  return {interval_length - t_hi, t_hi};
}

struct DiscreteStats {
  std::uint64_t sschedule_calls = 0;   // bipartitions plus group packing
  std::uint64_t comparison_sorts = 0;  // must stay 1: the top-level ranking
  std::size_t bipartition_rounds = 0;  // depth of counted partition levels
};

template <class N>
struct DiscreteResult {
  Schedule<N> schedule;
  std::vector<SpeedBracket> brackets;  // ascending job id
  DiscreteStats stats;

  N total_energy(const EnergyParams& params) const { return energy(schedule, params); }
};

namespace detail {

template <class N>
class DiscreteSolver {
 public:
  DiscreteSolver(const SpeedLadder<N>& ladder, bool pack, DiscreteStats& stats)
      : ladder_(ladder), pack_(pack), stats_(stats) {}

  std::vector<SpeedBracket>& brackets() { return brackets_; }

  // Binary partition over the remaining level range (lo, hi): every job in
  // `jobs` has continuous-optimal speed in [s_lo, s_hi) with the sentinels
  // s_0 = 0 and s_{d+1} = infinity. Testing the top level s_d is a pure
  // feasibility validation and does not count as a bipartition round.
  std::vector<Segment<N>> rec(const JobSet<N>& jobs, const Ranks& ranks,
                              std::size_t lo, std::size_t hi, std::size_t rounds) {
    std::vector<Segment<N>> segments;
    if (jobs.empty()) return segments;
    if (hi - lo == 1) {
      for (const Job<N>& j : jobs.jobs())
        brackets_.push_back({j.id, lo == 0 ? std::nullopt : std::optional<std::size_t>(lo)});
      if (pack_) pack_group(jobs, ranks, lo, segments);
      return segments;
    }

    std::size_t mid = lo + (hi - lo) / 2;
    bool counted = mid != ladder_.size();
    if (counted && rounds + 1 > stats_.bipartition_rounds)
      stats_.bipartition_rounds = rounds + 1;
    std::size_t child_rounds = rounds + (counted ? 1 : 0);

    const N& s = ladder_.level(mid);
    ++stats_.sschedule_calls;
    SScheduleResult<N> run = s_schedule(jobs, s, ranks);
    if (mid == ladder_.size() && !run.unfinished.empty()) {
      PartitionResult<N> strict = partition_at_speed(jobs, s, run, ranks, true);
      std::vector<JobId> ids;
      for (std::uint32_t p : strict.high) ids.push_back(jobs[p].id);
      throw InfeasibleError("jobs need a speed above the top level " +
                                num_to_string(s),
                            std::move(ids));
    }
    PartitionResult<N> part = partition_at_speed(jobs, s, run, ranks);
    if (part.constant_speed) {
      // Optimum is constant at exactly s: the whole subset sits at or above
      // this level.
      part.high.resize(jobs.size());
      for (std::uint32_t i = 0; i < jobs.size(); ++i) part.high[i] = i;
      part.low.clear();
      part.high_region.clear();
    }

    std::vector<Job<N>> high_jobs;
    high_jobs.reserve(part.high.size());
    for (std::uint32_t p : part.high) high_jobs.push_back(jobs[p]);
    Ranks high_ranks = propagate_ranks(ranks, part.high);
    segments = rec(JobSet<N>(std::move(high_jobs)), high_ranks, mid, hi, child_rounds);

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
    std::vector<Segment<N>> low_segs =
        rec(JobSet<N>(std::move(low_jobs)), low_ranks, lo, mid, child_rounds);
    for (const Segment<N>& seg : low_segs) excision.map_segment_to_parent(seg, segments);
    return segments;
  }

 private:
  // Schedules one bracket group: continuous optimum of the group, then each
  // segment rounded onto the group's two adjacent levels (high portion
  // first). Below-minimum groups run at s_1 with idle slack.
  void pack_group(const JobSet<N>& jobs, const Ranks& ranks, std::size_t lo,
                  std::vector<Segment<N>>& out) {
    using ar = arith<N>;
    SolveResult<N> group;
    std::vector<Segment<N>> cont = coalesce_segments(
        solve_core(jobs, ranks, group, static_cast<const SolveHooks<N>*>(nullptr)));
    stats_.sschedule_calls += group.stats.sschedule_calls;

    if (lo == 0) {
      const N& s1 = ladder_.level(1);
      for (const Segment<N>& seg : cont) {
        N duration = seg.work() / s1;
        if (duration > seg.length()) duration = seg.length();
        out.push_back({seg.start, seg.start + duration, s1, seg.job});
      }
      return;
    }
    if (lo == ladder_.size()) {
      for (Segment<N> seg : cont) {
        seg.speed = ladder_.level(lo);
        out.push_back(std::move(seg));
      }
      return;
    }
    const N& s_lo = ladder_.level(lo);
    const N& s_hi = ladder_.level(lo + 1);
    for (const Segment<N>& seg : cont) {
      if (ar::le(seg.speed, s_lo)) {
        out.push_back({seg.start, seg.end, s_lo, seg.job});
        continue;
      }
      if (ar::ge(seg.speed, s_hi)) {
        out.push_back({seg.start, seg.end, s_hi, seg.job});
        continue;
      }
      auto [t_lo, t_hi] = two_speed_round(seg.length(), seg.work(), s_lo, s_hi);
      N split = seg.start + t_hi;
      if (t_hi > N(0)) out.push_back({seg.start, split, s_hi, seg.job});
      if (t_lo > N(0)) out.push_back({split, seg.end, s_lo, seg.job});
    }
  }

  const SpeedLadder<N>& ladder_;
  bool pack_;
  DiscreteStats& stats_;
  std::vector<SpeedBracket> brackets_;
};

template <class N>
DiscreteResult<N> run_discrete(const JobSet<N>& jobset, const SpeedLadder<N>& ladder,
                               bool pack) {
  DiscreteResult<N> result;
  std::vector<Job<N>> active;
  active.reserve(jobset.size());
  for (const Job<N>& j : jobset.jobs()) {
    if (j.workload > N(0))
      active.push_back(j);
    else
      result.brackets.push_back({j.id, std::nullopt});
  }
  if (!active.empty()) {
    JobSet<N> core(std::move(active));
    ++result.stats.comparison_sorts;
    Ranks ranks = compute_ranks(core);
    DiscreteSolver<N> solver(ladder, pack, result.stats);
    std::vector<Segment<N>> segments =
        solver.rec(core, ranks, 0, ladder.size() + 1, 0);
    result.schedule.segments = coalesce_segments(std::move(segments));
    result.brackets.insert(result.brackets.end(), solver.brackets().begin(),
                           solver.brackets().end());
  }
  std::sort(result.brackets.begin(), result.brackets.end(),
            [](const SpeedBracket& a, const SpeedBracket& b) { return a.job < b.job; });
  return result;
}

}  // namespace detail

// Brackets every job's continuous-optimal speed between two adjacent ladder
// levels by binary partition over the levels. Throws InfeasibleError when
// some job needs a speed above s_d.
template <class N>
std::vector<SpeedBracket> bracket_jobs(const JobSet<N>& jobset,
                                       const SpeedLadder<N>& ladder) {
  return detail::run_discrete(jobset, ladder, false).brackets;
}

// Energy-minimal schedule restricted to the ladder speeds: bracket the jobs,
// solve each bracket group continuously on its own timeline, and round each
// resulting stretch onto the two adjacent levels. `params` only validates
// the power model; the optimal two-speed durations are independent of alpha.
template <class N>
DiscreteResult<N> solve_discrete(const JobSet<N>& jobset, const SpeedLadder<N>& ladder,
                                 const EnergyParams& params = EnergyParams()) {
  (void)params;
  return detail::run_discrete(jobset, ladder, true);
}

}  // namespace dvs

#endif  // DVS_DISCRETE_SOLVER_HPP
