#include <doctest.h>

#include <set>

#include "dvs/s_schedule.hpp"
#include "dvs/testkit.hpp"
#include "helpers.hpp"

using namespace dvs;
using dvs::test::dec;
using dvs::test::frac;
using R = Rational;

namespace {

// The worked single-job run over the 0.1..0.9 grid with prior occupancy
// [0.2,0.35) u [0.6,0.86) u [0.9,0.92): the regression anchor for the
// engine, traced by hand.
SScheduleEngine<R> seeded_engine() {
  std::vector<R> points;
  for (int i = 1; i <= 9; ++i) points.push_back(frac(i, 10));
  std::vector<Interval<R>> occupied = {{dec("0.2"), dec("0.35")},
                                       {dec("0.6"), dec("0.86")},
                                       {dec("0.9"), dec("0.92")}};
  return SScheduleEngine<R>(points, R(1), occupied);
}


// Work conservation and window containment for one job of a result.
void check_delivered(const JobSet<R>& inst, const SScheduleResult<R>& res,
                     std::size_t pos) {
  const Job<R>& j = inst[pos];
  R delivered(0);
  for (const Segment<R>& s : res.segments) {
    if (s.job != j.id) continue;
    CHECK(j.arrival <= s.start);
    CHECK(s.end <= j.deadline);
    delivered += s.work();
  }
  CHECK(delivered + res.residuals[pos] == j.workload);
}

}  // namespace

TEST_CASE("compute_ranks") {
  JobSet<R> js = test::jobs<R>({{1, dec("0.3"), R(1), R(1)},
                                {2, dec("0.1"), R(1), R(1)},
                                {3, dec("0.2"), R(1), R(1)}});
  Ranks ranks = compute_ranks(js);
  CHECK(ranks.arrival_rank == std::vector<std::uint32_t>{3, 1, 2});

  JobSet<R> ties = test::jobs<R>({{1, dec("0.1"), R(1), R(1)}, {2, dec("0.1"), R(1), R(1)}});
  Ranks tr = compute_ranks(ties);
  CHECK(tr.arrival_rank == std::vector<std::uint32_t>{1, 2});

  JobSet<R> dl = test::jobs<R>({{1, R(0), dec("0.9"), R(1)}, {2, R(0), dec("0.5"), R(1)}});
  Ranks dr = compute_ranks(dl);
  CHECK(dr.deadline_order == std::vector<std::uint32_t>{1, 0});
}

TEST_CASE("seeded frontier matches the worked example") {
  SScheduleEngine<R> engine = seeded_engine();
  std::vector<R> want = {dec("0.1"), dec("0.3"), dec("0.35"), dec("0.4"),
                         dec("0.5"), dec("0.7"), dec("0.8"), dec("0.86"),
                         dec("0.92"), R(1)};
  CHECK(engine.frontier_values() == want);
  // occupancy must start at grid points
  std::vector<R> points = {dec("0.1"), dec("0.2")};
  CHECK_THROWS_AS(SScheduleEngine<R>(points, R(1), {{dec("0.15"), dec("0.18")}}),
                  std::invalid_argument);
}

TEST_CASE("worked single-job run: segments, residual, traces") {
  for (SScheduleDriver driver : {SScheduleDriver::kRefined, SScheduleDriver::kBasic}) {
    SScheduleEngine<R> engine = seeded_engine();
    engine.reset_stats();
    R residual = engine.schedule_job(3, dec("0.96"), dec("0.35"), R(1), 42, driver, true);
    CHECK(residual == dec("0.02"));

    std::vector<std::pair<R, R>> want = {{dec("0.35"), dec("0.4")},
                                         {dec("0.4"), dec("0.5")},
                                         {dec("0.5"), dec("0.6")},
                                         {dec("0.86"), dec("0.9")},
                                         {dec("0.92"), dec("0.96")}};
    REQUIRE(engine.segments().size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(engine.segments()[i].start == want[i].first);
      CHECK(engine.segments()[i].end == want[i].second);
    }

    // four unions: {2,3}+{4}, {2..4}+{5}, {2..5}+{6,7,8}, {2..8}+{9}
    std::vector<std::pair<std::size_t, std::size_t>> unions = {
        {3, 4}, {4, 5}, {5, 8}, {8, 9}};
    CHECK(engine.union_trace() == unions);

    if (driver == SScheduleDriver::kRefined) {
      CHECK(engine.search_trace() == std::vector<std::size_t>{3, 4, 5, 8, 9});
      CHECK(engine.union_find().finds() == 5);  // 1 driver find + 4 union finds
    } else {
      CHECK(engine.search_trace() == std::vector<std::size_t>{3, 4, 5, 8, 9, 9});
      CHECK(engine.union_find().finds() == 10);  // 6 searches + 4 union finds
    }
    CHECK(engine.union_find().unions() == 4);
  }
}

TEST_CASE("single job on an empty frontier") {
  JobSet<R> js = test::jobs<R>({{1, R(0), R(1), dec("0.5")}});
  SScheduleResult<R> res = s_schedule(js, R(1));
  REQUIRE(res.segments.size() == 1);
  CHECK(res.segments[0].start == R(0));
  CHECK(res.segments[0].end == dec("0.5"));
  CHECK(res.residuals[0] == R(0));
  CHECK(res.unfinished.empty());
  auto gaps = res.idle_gaps();
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0].lo == dec("0.5"));
  CHECK(gaps[0].hi == R(1));
}

TEST_CASE("zero workload and bad speed") {
  JobSet<R> js = test::jobs<R>({{1, R(0), R(1), R(0)}});
  SScheduleResult<R> res = s_schedule(js, R(1));
  CHECK(res.segments.empty());
  CHECK(res.residuals[0] == R(0));
  CHECK_THROWS_AS(s_schedule(js, R(0)), std::invalid_argument);
  CHECK_THROWS_AS(s_schedule(js, R(-1)), std::invalid_argument);
}

TEST_CASE("duplicate arrivals occupy consecutive grid slots") {
  JobSet<R> js = test::jobs<R>({{1, R(0), R(2), R(1)},
                                {2, R(0), R(3), R(1)},
                                {3, R(0), R(4), R(1)}});
  SScheduleResult<R> res = s_schedule(js, R(1));
  CHECK(res.unfinished.empty());
  auto segs = coalesce_segments(res.segments);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].job == 1);
  CHECK(segs[1].job == 2);
  CHECK(segs[2].job == 3);
  CHECK(segs[2].end == R(3));
}

TEST_CASE("oracle equivalence against the priority-queue EDF baseline") {
  unsigned checked = 0;
  for (unsigned seed = 1; seed <= 400; ++seed) {
    InstanceSpec spec;
    spec.n = 1 + seed % 25;
    spec.seed = seed * 2654435761u;
    spec.structure = static_cast<InstanceStructure>(seed % 4);
    JobSet<R> inst = generate<R>(spec);
    R speed = frac(1 + seed % 5, 1 + (seed / 5) % 3);

    for (SScheduleDriver driver : {SScheduleDriver::kRefined, SScheduleDriver::kBasic}) {
      SScheduleOptions opts;
      opts.driver = driver;
      SScheduleResult<R> fast = s_schedule(inst, speed, opts);
      SScheduleResult<R> naive = naive_edf_s_schedule(inst, speed);
      REQUIRE(test::same_segments(fast.segments, naive.segments));
      REQUIRE(fast.residuals == naive.residuals);
      REQUIRE(fast.unfinished == naive.unfinished);

      // counting bounds
      std::size_t m = fast.stats.m, n = fast.stats.n;
      CHECK(fast.stats.unions <= m - 2);
      if (driver == SScheduleDriver::kRefined)
        CHECK(fast.stats.finds <= (m - 2) + n);
      else
        CHECK(fast.stats.finds <= 2 * (m - 2) + n);

      // work conservation and window containment
      for (std::size_t i = 0; i < inst.size(); ++i) check_delivered(inst, fast, i);

      // at most 2n maximal execution intervals
      CHECK(coalesce_segments(fast.segments).size() <= 2 * n);
      ++checked;
    }
  }
  CHECK(checked == 800);
}

TEST_CASE("frontier soundness and canonical intervals") {
  for (unsigned seed = 1; seed <= 60; ++seed) {
    InstanceSpec spec;
    spec.n = 2 + seed % 10;
    spec.seed = seed * 97;
    spec.structure = static_cast<InstanceStructure>(seed % 4);
    JobSet<R> inst = generate<R>(spec);
    SScheduleResult<R> res = s_schedule(inst, R(2));

    // e_i within its cell, occupied prefix equals scheduled time, and no
    // arrival strictly inside an idle canonical interval
    const auto& t = res.grid_points;
    const auto& e = res.frontier;
    REQUIRE(e.size() + 1 == t.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      CHECK(t[i] <= e[i]);
      CHECK(e[i] <= t[i + 1]);
      for (const Job<R>& j : inst.jobs()) {
        bool inside = e[i] < j.arrival && j.arrival < t[i + 1];
        CHECK(!inside);
      }
    }
    // [e_i, t_{i+1}) intersects no segment
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!(e[i] < t[i + 1])) continue;
      for (const Segment<R>& s : res.segments) {
        bool overlaps = s.start < t[i + 1] && e[i] < s.end;
        CHECK(!overlaps);
      }
    }
    // total scheduled time equals the sum of occupied prefixes
    R occupied(0);
    for (std::size_t i = 0; i < e.size(); ++i) occupied += e[i] - t[i];
    R scheduled(0);
    for (const Segment<R>& s : res.segments) scheduled += s.length();
    CHECK(occupied == scheduled);
  }
}
