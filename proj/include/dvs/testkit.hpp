#ifndef DVS_TESTKIT_HPP
#define DVS_TESTKIT_HPP

#include <algorithm>
#include <cstdint>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "dvs/model.hpp"
#include "dvs/s_schedule.hpp"

namespace dvs {

// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard;
// the bounded draws below avoid std::uniform_int_distribution, whose
// results vary across library implementations.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }
  long range(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

enum class InstanceStructure { kUniform, kNested, kLaminar, kDisjointClusters };

inline const char* to_string(InstanceStructure s) {
  switch (s) {
    case InstanceStructure::kUniform: return "uniform";
    case InstanceStructure::kNested: return "nested";
    case InstanceStructure::kLaminar: return "laminar";
    case InstanceStructure::kDisjointClusters: return "disjoint-clusters";
  }
  return "unknown";
}

inline InstanceStructure structure_from_string(const std::string& name) {
  if (name == "uniform") return InstanceStructure::kUniform;
  if (name == "nested") return InstanceStructure::kNested;
  if (name == "laminar") return InstanceStructure::kLaminar;
  if (name == "disjoint-clusters") return InstanceStructure::kDisjointClusters;
  throw std::invalid_argument("unknown instance structure: " + name);
}

struct InstanceSpec {
  std::size_t n = 8;
  long resolution = 0;  // grid denominator; 0 derives one from n
  long workload_min = 0;
  long workload_max = 9;
  std::uint64_t seed = 1;
  InstanceStructure structure = InstanceStructure::kUniform;
};

// Deterministic instance generator over an integer time grid, so both the
// rational and the double instantiation read the inputs exactly.
template <class N>
JobSet<N> generate(const InstanceSpec& spec) {
  if (spec.workload_min < 0 || spec.workload_max < spec.workload_min)
    throw std::invalid_argument("bad workload range");
  std::vector<Job<N>> jobs;
  if (spec.n == 0) return JobSet<N>(jobs);
  long q = spec.resolution > 0 ? spec.resolution
                               : std::max<long>(16, 4 * static_cast<long>(spec.n) + 8);
  if (q < 2 * static_cast<long>(spec.n)) q = 2 * static_cast<long>(spec.n) + 2;
  TestRng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  auto workload = [&] { return rng.range(spec.workload_min, spec.workload_max); };

  std::vector<std::pair<long, long>> windows;
  switch (spec.structure) {
    case InstanceStructure::kUniform: {
      for (std::size_t i = 0; i < spec.n; ++i) {
        long a = rng.range(0, q - 1);
        long b = rng.range(a + 1, q);
        windows.push_back({a, b});
      }
      break;
    }
    case InstanceStructure::kNested: {
      // 2n distinct points folded outside-in give a strictly nested chain.
      std::vector<long> points(static_cast<std::size_t>(q) + 1);
      for (long v = 0; v <= q; ++v) points[static_cast<std::size_t>(v)] = v;
      for (std::size_t i = points.size() - 1; i > 0; --i)
        std::swap(points[i], points[rng.below(i + 1)]);
      points.resize(2 * spec.n);
      std::sort(points.begin(), points.end());
      for (std::size_t i = 0; i < spec.n; ++i)
        windows.push_back({points[i], points[2 * spec.n - 1 - i]});
      break;
    }
    case InstanceStructure::kLaminar: {
      // Interval tree: every window is strictly inside its parent and
      // disjoint from its siblings.
      std::vector<std::pair<long, long>> open;
      open.push_back({0, q});
      while (windows.size() < spec.n) {
        if (open.empty()) open.push_back({0, q});
        std::size_t pick = rng.below(open.size());
        std::pair<long, long> w = open[pick];
        open.erase(open.begin() + static_cast<long>(pick));
        windows.push_back(w);
        long len = w.second - w.first;
        if (len >= 4) {
          long mid = w.first + rng.range(2, len - 1);
          long cut = rng.range(1, 2);
          if (cut == 2 && mid - w.first >= 2 && w.second - mid >= 3) {
            open.push_back({w.first + 1, mid});
            open.push_back({mid + 1, w.second - 1});
          } else {
            open.push_back({w.first + 1, w.second - 1});
          }
        }
      }
      break;
    }
    case InstanceStructure::kDisjointClusters: {
      std::size_t clusters = 1;
      while (clusters * clusters < spec.n) ++clusters;
      long width = q / static_cast<long>(clusters);
      if (width < 4) {
        width = 4;
        q = width * static_cast<long>(clusters);
      }
      for (std::size_t i = 0; i < spec.n; ++i) {
        std::size_t c = rng.below(clusters);
        long lo = static_cast<long>(c) * width;
        long hi = lo + width - 1;  // one idle unit between clusters
        long a = rng.range(lo, hi - 1);
        long b = rng.range(a + 1, hi);
        windows.push_back({a, b});
      }
      break;
    }
  }

  jobs.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i)
    jobs.push_back({static_cast<JobId>(i + 1), N(windows[i].first),
                    N(windows[i].second), N(workload())});
  return JobSet<N>(jobs);
}

// Event-driven EDF at one fixed speed with deadline abandonment: the
// priority-queue baseline the canonical-grid scheduler is checked against.
template <class N>
SScheduleResult<N> naive_edf_s_schedule(const JobSet<N>& jobset, const N& speed) {
  using ar = arith<N>;
  if (!(speed > N(0))) throw std::invalid_argument("speed must be positive");
  SScheduleResult<N> result;
  std::size_t n = jobset.size();
  result.stats.n = n;
  result.residuals.assign(n, N(0));
  for (const Job<N>& j : jobset.jobs()) result.job_ids.push_back(j.id);
  if (n == 0) return result;

  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return jobset[a].arrival < jobset[b].arrival ||
           (jobset[a].arrival == jobset[b].arrival && jobset[a].id < jobset[b].id);
  });

  struct Active {
    N deadline;
    JobId id;
    std::uint32_t pos;
    N remaining;
    bool operator>(const Active& o) const {
      return deadline > o.deadline || (deadline == o.deadline && id > o.id);
    }
  };
  std::priority_queue<Active, std::vector<Active>, std::greater<Active>> ready;
  std::size_t next = 0;
  N now = jobset[order[0]].arrival;
  while (next < n || !ready.empty()) {
    if (ready.empty() && next < n && now < jobset[order[next]].arrival)
      now = jobset[order[next]].arrival;
    while (next < n && jobset[order[next]].arrival <= now) {
      const Job<N>& j = jobset[order[next]];
      if (j.workload > N(0)) {
        if (j.deadline <= now)
          result.residuals[order[next]] = j.workload;  // window already gone
        else
          ready.push({j.deadline, j.id, order[next], j.workload});
      }
      ++next;
    }
    if (ready.empty()) continue;
    Active run = ready.top();
    ready.pop();
    N until = now + run.remaining / speed;
    if (until > run.deadline) until = run.deadline;
    if (next < n && jobset[order[next]].arrival < until)
      until = jobset[order[next]].arrival;
    if (now < until) {
      result.segments.push_back({now, until, speed, run.id});
      run.remaining -= speed * (until - now);
      now = until;
    }
    if (ar::is_zero(run.remaining)) continue;  // finished
    if (ar::ge(now, run.deadline))
      result.residuals[run.pos] = run.remaining;  // abandoned at the deadline
    else
      ready.push(run);  // preempted by an arrival
  }

  for (std::size_t i = 0; i < n; ++i)
    if (result.residuals[i] > N(0)) result.unfinished.push_back(result.job_ids[i]);
  std::sort(result.unfinished.begin(), result.unfinished.end());
  return result;
}

// Random feasible schedules: every job gets its own execution speed, EDF
// decides the interleaving, and any job that would miss its deadline has its
// speed doubled until the draw becomes feasible. Never consults a solver,
// so the samples are genuine optimality witnesses.
template <class N>
std::vector<Schedule<N>> feasible_sampler(const JobSet<N>& jobset, std::size_t count,
                                          std::uint64_t seed) {
  std::vector<Schedule<N>> samples;
  if (count == 0 || jobset.empty()) return samples;

  std::vector<std::uint32_t> order(jobset.size());
  for (std::uint32_t i = 0; i < jobset.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return jobset[a].arrival < jobset[b].arrival ||
           (jobset[a].arrival == jobset[b].arrival && jobset[a].id < jobset[b].id);
  });

  TestRng rng(seed ^ 0xa076bcf7f4a7c15dULL);
  for (std::size_t sample = 0; sample < count; ++sample) {
    std::vector<N> job_speed(jobset.size());
    for (std::size_t i = 0; i < jobset.size(); ++i) {
      const Job<N>& j = jobset[i];
      if (j.workload == N(0)) {
        job_speed[i] = N(1);
        continue;
      }
      // Base rate spreads the job over its own window; jitter by 2^[-2, 2].
      N base = j.workload / (j.deadline - j.arrival);
      long shift = rng.range(-2, 2);
      N factor = shift >= 0 ? N(1L << shift) : N(1) / N(1L << (-shift));
      job_speed[i] = base * factor;
    }

    for (int repair = 0;; ++repair) {
      if (repair > 200) throw std::logic_error("feasible sampler failed to repair");
      std::vector<Segment<N>> segments;
      std::uint32_t violator = 0;
      if (simulate_per_job_speed(jobset, order, job_speed, segments, violator)) {
        samples.push_back(Schedule<N>{std::move(segments)});
        break;
      }
      job_speed[violator] = job_speed[violator] * N(2);
    }
  }
  return samples;
}

// EDF with per-job speeds; returns false and the first violating position
// when some job cannot meet its deadline.
template <class N>
bool simulate_per_job_speed(const JobSet<N>& jobset,
                            const std::vector<std::uint32_t>& arrival_order,
                            const std::vector<N>& job_speed,
                            std::vector<Segment<N>>& segments,
                            std::uint32_t& violator) {
  using ar = arith<N>;
  struct Active {
    N deadline;
    JobId id;
    std::uint32_t pos;
    N remaining;
    bool operator>(const Active& o) const {
      return deadline > o.deadline || (deadline == o.deadline && id > o.id);
    }
  };
  std::priority_queue<Active, std::vector<Active>, std::greater<Active>> ready;
  std::size_t n = jobset.size();
  std::size_t next = 0;
  N now = jobset[arrival_order[0]].arrival;
  while (next < n || !ready.empty()) {
    if (ready.empty() && next < n && now < jobset[arrival_order[next]].arrival)
      now = jobset[arrival_order[next]].arrival;
    while (next < n && jobset[arrival_order[next]].arrival <= now) {
      std::uint32_t pos = arrival_order[next];
      const Job<N>& j = jobset[pos];
      if (j.workload > N(0)) ready.push({j.deadline, j.id, pos, j.workload});
      ++next;
    }
    if (ready.empty()) continue;
    Active run = ready.top();
    ready.pop();
    const N& v = job_speed[run.pos];
    N finish = now + run.remaining / v;
    N until = finish;
    if (next < n && jobset[arrival_order[next]].arrival < until)
      until = jobset[arrival_order[next]].arrival;
    if (ar::gt(until, run.deadline)) {
      violator = run.pos;
      return false;
    }
    if (now < until) {
      segments.push_back({now, until, v, run.id});
      run.remaining -= v * (until - now);
      now = until;
    }
    if (!ar::is_zero(run.remaining)) {
      if (ar::ge(now, run.deadline)) {
        violator = run.pos;
        return false;
      }
      ready.push(run);
    }
  }
  segments = coalesce_segments(std::move(segments));
  return true;
}

}  // namespace dvs

#endif  // DVS_TESTKIT_HPP
