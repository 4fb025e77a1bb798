#include <doctest.h>

#include <cmath>
#include <set>

#include "dvs/discrete_solver.hpp"
#include "dvs/testkit.hpp"
#include "dvs/yds.hpp"
#include "helpers.hpp"

using namespace dvs;
using dvs::test::dec;
using dvs::test::frac;
using R = Rational;

namespace {

// Reference pipeline: full continuous optimum from the critical-interval
// solver, then each stretch rounded onto the ladder with two_speed_round.
R round_after_reference(const JobSet<R>& inst, const std::vector<R>& levels,
                        const EnergyParams& params, bool* on_ladder = nullptr) {
  MesResult<R> ref = mes_schedule(inst);
  R total(0);
  bool all_on = true;
  for (const Segment<R>& seg : coalesce_segments(ref.schedule.segments)) {
    std::size_t k = 0;
    while (k < levels.size() && levels[k] < seg.speed) ++k;
    if (k < levels.size() && levels[k] == seg.speed) {
      total += detail::pow_speed(seg.speed, params) * seg.length();
      continue;
    }
    all_on = false;
    if (k == 0) {
      total += detail::pow_speed(levels[0], params) * (seg.work() / levels[0]);
      continue;
    }
    REQUIRE(k < levels.size());  // otherwise the instance is infeasible
    auto [t_lo, t_hi] = two_speed_round(seg.length(), seg.work(), levels[k - 1], levels[k]);
    total += detail::pow_speed(levels[k - 1], params) * t_lo +
             detail::pow_speed(levels[k], params) * t_hi;
  }
  if (on_ladder) *on_ladder = all_on;
  return total;
}

}  // namespace

TEST_CASE("speed ladder validation") {
  CHECK_THROWS_AS(SpeedLadder<R>({}), std::invalid_argument);
  CHECK_THROWS_AS(SpeedLadder<R>({R(0), R(1)}), std::invalid_argument);
  CHECK_THROWS_AS(SpeedLadder<R>({R(2), R(2)}), std::invalid_argument);
  SpeedLadder<R> ok({R(1), R(3), R(5)});
  CHECK(ok.size() == 3);
  CHECK(ok.level(2) == R(3));
}

TEST_CASE("two_speed_round") {
  auto [t_lo, t_hi] = two_speed_round(dec("0.5"), R(2), R(3), R(5));
  CHECK(t_lo == dec("0.25"));
  CHECK(t_hi == dec("0.25"));
  CHECK(R(3) * t_lo + R(5) * t_hi == R(2));

  auto [lo_only, hi_zero] = two_speed_round(R(1), R(3), R(3), R(5));
  CHECK(lo_only == R(1));
  CHECK(hi_zero == R(0));

  auto [lo_zero, hi_only] = two_speed_round(R(1), R(5), R(3), R(5));
  CHECK(lo_zero == R(0));
  CHECK(hi_only == R(1));

  CHECK_THROWS_AS(two_speed_round(R(1), R(6), R(3), R(5)), std::invalid_argument);
  CHECK_THROWS_AS(two_speed_round(R(1), R(2), R(3), R(5)), std::invalid_argument);
  CHECK_THROWS_AS(two_speed_round(R(1), R(4), R(5), R(3)), std::invalid_argument);
}

TEST_CASE("bracket_jobs on worked instances") {
  JobSet<R> two = test::jobs<R>({{1, R(0), R(1), R(1)}, {2, dec("0.25"), dec("0.75"), R(2)}});
  SpeedLadder<R> ladder({R(1), R(3), R(5)});
  auto brackets = bracket_jobs(two, ladder);
  REQUIRE(brackets.size() == 2);
  CHECK(brackets[0].job == 1);
  CHECK(brackets[0].lower == 1);  // speed 2 in [1, 3)
  CHECK(brackets[1].job == 2);
  CHECK(brackets[1].lower == 2);  // speed 4 in [3, 5)

  JobSet<R> slow = test::jobs<R>({{1, R(0), R(1), dec("0.5")}});
  auto below = bracket_jobs(slow, SpeedLadder<R>({R(1), R(2)}));
  REQUIRE(below.size() == 1);
  CHECK(!below[0].lower.has_value());

  JobSet<R> fast = test::jobs<R>({{1, R(0), R(1), R(6)}});
  CHECK_THROWS_AS(bracket_jobs(fast, SpeedLadder<R>({R(1), R(3), R(5)})), InfeasibleError);
  try {
    bracket_jobs(fast, SpeedLadder<R>({R(1), R(3), R(5)}));
  } catch (const InfeasibleError& e) {
    CHECK(e.jobs == std::vector<JobId>{1});
  }
}

TEST_CASE("solve_discrete on worked instances") {
  EnergyParams alpha2(2.0);
  JobSet<R> two = test::jobs<R>({{1, R(0), R(1), R(1)}, {2, dec("0.25"), dec("0.75"), R(2)}});
  DiscreteResult<R> res = solve_discrete(two, SpeedLadder<R>({R(3), R(5)}), alpha2);
  CHECK(res.total_energy(alpha2) == dec("11.5"));
  CHECK(verify_feasible(res.schedule, two).ok());
  CHECK(res.total_energy(alpha2) >= mes_schedule(two).total_energy(alpha2));

  // ladder containing every optimal speed exactly reproduces the continuous
  // optimum
  DiscreteResult<R> exact = solve_discrete(two, SpeedLadder<R>({R(2), R(4)}), alpha2);
  CHECK(exact.total_energy(alpha2) == R(10));

  // below-minimum job runs at the lowest level with idle slack
  JobSet<R> slow = test::jobs<R>({{1, R(0), R(1), dec("0.5")}});
  DiscreteResult<R> under = solve_discrete(slow, SpeedLadder<R>({R(1), R(2)}), alpha2);
  CHECK(under.total_energy(alpha2) == dec("0.5"));
  REQUIRE(under.schedule.segments.size() == 1);
  CHECK(under.schedule.segments[0].speed == R(1));
  CHECK(under.schedule.segments[0].length() == dec("0.5"));
  CHECK(verify_feasible(under.schedule, slow).ok());
}

TEST_CASE("discrete matches the round-after-reference pipeline") {
  EnergyParams alpha2(2.0);
  unsigned solved = 0, infeasible = 0;
  for (unsigned seed = 1; seed <= 250; ++seed) {
    InstanceSpec spec;
    spec.n = 1 + seed % 12;
    spec.seed = seed * 733 + 11;
    spec.structure = static_cast<InstanceStructure>(seed % 4);
    spec.workload_min = (seed % 9 == 0) ? 0 : 1;
    JobSet<R> inst = generate<R>(spec);

    TestRng rng(seed * 5 + 1);
    std::size_t d = 1 + rng.below(16);
    std::vector<R> levels;
    long v = 0;
    for (std::size_t i = 0; i < d; ++i) {
      v += 1 + static_cast<long>(rng.below(4));
      levels.push_back(frac(v, 2));
    }
    SpeedLadder<R> ladder(levels);

    MesResult<R> ref = mes_schedule(inst);
    R max_speed(0);
    for (const auto& [id, speed] : ref.job_speed) max_speed = std::max(max_speed, speed);

    if (max_speed > levels.back()) {
      CHECK_THROWS_AS(solve_discrete(inst, ladder, alpha2), InfeasibleError);
      ++infeasible;
      continue;
    }
    DiscreteResult<R> got = solve_discrete(inst, ladder, alpha2);
    ++solved;

    bool on_ladder = false;
    R want = round_after_reference(inst, levels, alpha2, &on_ladder);
    REQUIRE(got.total_energy(alpha2) == want);
    CHECK(verify_feasible(got.schedule, inst).ok());
    CHECK(got.total_energy(alpha2) >= ref.total_energy(alpha2));
    CHECK((got.total_energy(alpha2) == ref.total_energy(alpha2)) == on_ladder);

    // every job uses at most two speeds, and they are adjacent levels
    std::map<JobId, std::set<R>> used;
    for (const Segment<R>& s : got.schedule.segments) used[s.job].insert(s.speed);
    for (const auto& [id, speeds] : used) {
      REQUIRE(speeds.size() <= 2);
      for (const R& s : speeds)
        CHECK(std::find(levels.begin(), levels.end(), s) != levels.end());
      if (speeds.size() == 2) {
        auto it = speeds.begin();
        std::size_t ia = std::find(levels.begin(), levels.end(), *it) - levels.begin();
        std::size_t ib = std::find(levels.begin(), levels.end(), *std::next(it)) -
                         levels.begin();
        CHECK(ib == ia + 1);
      }
    }

    // instrumentation: logarithmic bipartition depth, one comparison sort
    std::size_t bound = d <= 1 ? 0 : static_cast<std::size_t>(std::ceil(std::log2(double(d))));
    CHECK(got.stats.bipartition_rounds <= bound);
    CHECK(got.stats.comparison_sorts <= 1);

    // brackets agree with the reference speeds
    for (const SpeedBracket& b : got.brackets) {
      R speed = ref.job_speed.at(b.job);
      if (!b.lower) {
        CHECK(speed < levels[0]);
      } else if (*b.lower == d) {
        CHECK(speed == levels[d - 1]);
      } else {
        CHECK(levels[*b.lower - 1] <= speed);
        CHECK(speed < levels[*b.lower]);
      }
    }
  }
  CHECK(solved > 50);
  CHECK(infeasible > 0);
}
