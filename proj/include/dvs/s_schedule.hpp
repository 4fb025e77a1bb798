#ifndef DVS_S_SCHEDULE_HPP
#define DVS_S_SCHEDULE_HPP

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "dvs/interval_union_find.hpp"
#include "dvs/model.hpp"

namespace dvs {

// Deadline processing order and arrival ranks for a job set. Both orders
// break ties by job id. Computed once per top-level solve by comparison
// sort; recursion levels derive theirs by linear propagation instead.
struct Ranks {
  std::vector<std::uint32_t> deadline_order;  // job positions sorted by (deadline, id)
  std::vector<std::uint32_t> arrival_order;   // job positions sorted by (arrival, id)
  std::vector<std::uint32_t> arrival_rank;    // arrival_rank[pos] is 1-based
};

template <class N>
Ranks compute_ranks(const JobSet<N>& jobset) {
  Ranks ranks;
  std::size_t n = jobset.size();
  ranks.deadline_order.resize(n);
  ranks.arrival_order.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    ranks.deadline_order[i] = i;
    ranks.arrival_order[i] = i;
  }
  std::sort(ranks.deadline_order.begin(), ranks.deadline_order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              const Job<N>&ja = jobset[a], &jb = jobset[b];
              return ja.deadline < jb.deadline ||
                     (ja.deadline == jb.deadline && ja.id < jb.id);
            });
  std::sort(ranks.arrival_order.begin(), ranks.arrival_order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              const Job<N>&ja = jobset[a], &jb = jobset[b];
              return ja.arrival < jb.arrival ||
                     (ja.arrival == jb.arrival && ja.id < jb.id);
            });
  ranks.arrival_rank.resize(n);
  for (std::uint32_t r = 0; r < n; ++r)
    ranks.arrival_rank[ranks.arrival_order[r]] = r + 1;
  return ranks;
}

enum class SScheduleDriver {
  // One canonical-interval search per loop iteration, as in the plain
  // listing of the algorithm.
  kBasic,
  // One search per job; after a union the merged set's name is reused as
  // the next p, and a job scheduled up to its deadline stops immediately.
  kRefined,
};

struct SScheduleOptions {
  SScheduleDriver driver = SScheduleDriver::kRefined;
  bool record_trace = false;
};

struct SScheduleStats {
  std::size_t n = 0;            // jobs scheduled
  std::size_t m = 0;            // grid size including both sentinels
  std::uint64_t finds = 0;
  std::uint64_t unions = 0;
};

template <class N>
struct SScheduleResult {
  std::vector<Segment<N>> segments;  // raw emission order per canonical interval,
                                     // sorted by start time
  std::vector<JobId> job_ids;        // jobset order
  std::vector<N> residuals;          // parallel to job_ids; 0 when finished
  std::vector<JobId> unfinished;     // ids with positive residual, ascending
  std::vector<N> grid_points;        // t_1..t_m
  std::vector<N> frontier;           // e_1..e_{m-1}
  SScheduleStats stats;
  // Populated when tracing: p per canonical-interval inspection, and
  // (p, merged name) per union, in execution order.
  std::vector<std::size_t> search_trace;
  std::vector<std::pair<std::size_t, std::size_t>> union_trace;

  N residual_of(JobId id) const {
    for (std::size_t i = 0; i < job_ids.size(); ++i)
      if (job_ids[i] == id) return residuals[i];
    throw std::invalid_argument("unknown job id " + std::to_string(id));
  }

  // Idle time inside [t_1, H], materialized on demand.
  std::vector<Interval<N>> idle_gaps() const {
    std::vector<Interval<N>> gaps;
    if (grid_points.size() < 2) return gaps;
    N horizon = grid_points[grid_points.size() - 2];
    std::vector<Segment<N>> busy = coalesce_segments(segments);
    N cursor = grid_points.front();
    for (const Segment<N>& s : busy) {
      if (cursor < s.start) gaps.push_back({cursor, s.start});
      cursor = std::max(cursor, s.end);
    }
    if (cursor < horizon) gaps.push_back({cursor, horizon});
    return gaps;
  }
};

// Occupancy frontier over the canonical time grid. For every cell i the
// value e_i in [t_i, t_{i+1}] splits the cell into a fully occupied prefix
// [t_i, e_i) and an idle remainder [e_i, t_{i+1}). Cells whose idle part is
// empty are merged with their successor in the interval union-find, so the
// earliest idle slot at or after t_i is found as the cell named find(i).
template <class N>
class SScheduleEngine {
  using ar = arith<N>;

 public:
  // points: sorted multiset of grid times below the horizon (the arrivals);
  // horizon: H, extended internally with the sentinel cell [H, H+1).
  // occupied: disjoint intervals already in use; every maximal occupied
  // stretch must begin at a grid point.
  SScheduleEngine(std::vector<N> points, N horizon,
                  std::vector<Interval<N>> occupied = {})
      : uf_(points.size() + 1) {
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
      if (points[i + 1] < points[i])
        throw std::invalid_argument("grid points must be sorted");
    if (!points.empty() && horizon < points.back())
      throw std::invalid_argument("grid points must not exceed the horizon");
    t_.reserve(points.size() + 3);
    t_.push_back(N(0));  // unused slot; indices are 1-based
    for (N& p : points) t_.push_back(std::move(p));
    t_.push_back(horizon);
    t_.push_back(horizon + N(1));
    m_ = t_.size() - 1;

    frontier_.assign(m_ - 1, N(0));
    for (std::size_t i = 1; i < m_; ++i) frontier_[i - 1] = t_[i];
    seed_occupancy(std::move(occupied));
    merge_full_cells();
  }

  std::size_t grid_size() const { return m_; }
  const N& grid_point(std::size_t i) const { return t_[i]; }
  std::vector<N> grid_values() const { return {t_.begin() + 1, t_.end()}; }
  std::vector<N> frontier_values() const { return frontier_; }

  IntervalUnionFind& union_find() { return uf_; }
  const std::vector<Segment<N>>& segments() const { return segments_; }
  const std::vector<std::size_t>& search_trace() const { return search_trace_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& union_trace() const {
    return union_trace_;
  }

  void reset_stats() {
    uf_.reset_counters();
    search_trace_.clear();
    union_trace_.clear();
  }

  // Runs one job through the driver; returns the residual workload left
  // unscheduled (0 when the job finished). arrival_index is the 1-based
  // grid index with t_i equal to the job's arrival.
  N schedule_job(std::size_t arrival_index, const N& deadline, const N& workload,
                 const N& speed, JobId id, SScheduleDriver driver,
                 bool record_trace = false) {
    if (!(speed > N(0))) throw std::invalid_argument("speed must be positive");
    if (arrival_index < 1 || arrival_index >= m_)
      throw std::invalid_argument("arrival index outside the grid");
    N r = workload;
    if (ar::is_zero(r)) return N(0);
    trace_ = record_trace;

    std::size_t p = uf_.find(arrival_index);
    while (true) {
      if (trace_) search_trace_.push_back(p);
      N& e = frontier_[p - 1];
      if (ar::ge(e, deadline)) break;  // no idle slot before the deadline
      const N& cell_end = t_[p + 1];
      N u = std::min(deadline, cell_end);
      N available = speed * (u - e);
      if (ar::gt(r, available)) {
        segments_.push_back({e, u, speed, id});
        r -= available;
        if (ar::eq(u, cell_end)) {
          e = cell_end;
          p = do_union(p);
          if (driver == SScheduleDriver::kRefined) continue;
        } else {
          // u is the deadline: nothing before it can open up later.
          e = u;
          if (driver == SScheduleDriver::kRefined) break;
        }
      } else {
        N end = r / speed + e;
        if (ar::eq(end, cell_end)) end = cell_end;
        segments_.push_back({e, end, speed, id});
        e = end;
        r = N(0);
        if (e == cell_end) do_union(p);
        break;
      }
      if (driver == SScheduleDriver::kBasic) {
        if (ar::is_zero(r)) break;
        p = uf_.find(arrival_index);
      }
    }
    if (ar::is_zero(r)) r = N(0);
    return r;
  }

 private:
  std::size_t do_union(std::size_t p) {
    std::size_t merged = uf_.union_with_next(p);
    if (trace_) union_trace_.push_back({p, merged});
    return merged;
  }

  void seed_occupancy(std::vector<Interval<N>> occupied) {
    if (occupied.empty()) return;
    std::sort(occupied.begin(), occupied.end(),
              [](const Interval<N>& a, const Interval<N>& b) { return a.lo < b.lo; });
    std::vector<Interval<N>> merged;
    for (const Interval<N>& o : occupied) {
      if (!(o.lo < o.hi)) throw std::invalid_argument("empty occupied interval");
      if (!merged.empty() && o.lo <= merged.back().hi)
        merged.back().hi = std::max(merged.back().hi, o.hi);
      else
        merged.push_back(o);
    }
    std::size_t cell = 1;
    for (const Interval<N>& o : merged) {
      while (cell < m_ && t_[cell + 1] <= o.lo) ++cell;
      if (cell >= m_ || !(t_[cell] == o.lo))
        throw std::invalid_argument(
            "occupied stretches must begin at a grid point");
      N end = o.hi;
      if (end > t_[m_])
        throw std::invalid_argument("occupancy extends past the grid");
      std::size_t c = cell;
      while (c < m_ && t_[c + 1] <= end) {
        frontier_[c - 1] = t_[c + 1];
        ++c;
      }
      if (c < m_ && t_[c] < end) frontier_[c - 1] = end;
    }
  }

  // Cells with no idle remainder (seeded full, or duplicate grid values)
  // are merged into their successor so that set names always carry a
  // non-empty canonical interval.
  void merge_full_cells() {
    for (std::size_t i = 1; i + 1 < m_; ++i)
      if (frontier_[i - 1] == t_[i + 1]) uf_.union_with_next(i);
  }

  std::vector<N> t_;         // 1-based grid values, size m_+1
  std::size_t m_ = 0;        // number of grid points
  std::vector<N> frontier_;  // e_i at index i-1
  bool trace_ = false;
  IntervalUnionFind uf_;
  std::vector<Segment<N>> segments_;
  std::vector<std::size_t> search_trace_;
  std::vector<std::pair<std::size_t, std::size_t>> union_trace_;
};

// EDF at one fixed speed with deadline abandonment, computed offline in
// deadline order over the canonical grid.
template <class N>
SScheduleResult<N> s_schedule(const JobSet<N>& jobset, const N& speed,
                              const Ranks& ranks, SScheduleOptions opts = {}) {
  if (!(speed > N(0))) throw std::invalid_argument("speed must be positive");
  std::size_t n = jobset.size();
  if (ranks.deadline_order.size() != n || ranks.arrival_rank.size() != n)
    throw std::invalid_argument("ranks do not match the job set");

  SScheduleResult<N> result;
  result.stats.n = n;
  result.job_ids.reserve(n);
  for (const Job<N>& j : jobset.jobs()) result.job_ids.push_back(j.id);
  result.residuals.assign(n, N(0));
  if (n == 0) return result;

  std::vector<N> points(n);
  for (std::size_t r = 0; r < n; ++r)
    points[r] = jobset[ranks.arrival_order[r]].arrival;
  N horizon = jobset[ranks.deadline_order[n - 1]].deadline;

  SScheduleEngine<N> engine(std::move(points), horizon);
  for (std::uint32_t pos : ranks.deadline_order) {
    const Job<N>& j = jobset[pos];
    result.residuals[pos] =
        engine.schedule_job(ranks.arrival_rank[pos], j.deadline, j.workload,
                            speed, j.id, opts.driver, opts.record_trace);
  }

  result.segments = engine.segments();
  std::sort(result.segments.begin(), result.segments.end(),
            [](const Segment<N>& a, const Segment<N>& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < n; ++i)
    if (result.residuals[i] > N(0)) result.unfinished.push_back(result.job_ids[i]);
  std::sort(result.unfinished.begin(), result.unfinished.end());
  result.grid_points = engine.grid_values();
  result.frontier = engine.frontier_values();
  result.stats.m = engine.grid_size();
  result.stats.finds = engine.union_find().finds();
  result.stats.unions = engine.union_find().unions();
  if (opts.record_trace) {
    result.search_trace = engine.search_trace();
    result.union_trace = engine.union_trace();
  }
  return result;
}

template <class N>
SScheduleResult<N> s_schedule(const JobSet<N>& jobset, const N& speed,
                              SScheduleOptions opts = {}) {
  return s_schedule(jobset, speed, compute_ranks(jobset), opts);
}

}  // namespace dvs

#endif  // DVS_S_SCHEDULE_HPP
