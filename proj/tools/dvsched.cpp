// dvsched: continuous and discrete minimum-energy voltage schedules.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dvs/continuous_solver.hpp"
#include "dvs/discrete_solver.hpp"
#include "dvs/io.hpp"
#include "dvs/model.hpp"
#include "dvs/s_schedule.hpp"
#include "dvs/testkit.hpp"
#include "dvs/yds.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerification = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dvs::ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct SolveArgs {
  std::string input;
  std::string output;
  std::string model = "continuous";
  std::string numeric = "rational";
  double alpha = 0;  // 0: take from the document, else 3
  std::string speeds;
};

template <class N>
std::vector<N> parse_speed_list(const std::string& csv) {
  std::vector<N> levels;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) levels.push_back(dvs::num_from_string<N>(item));
  return levels;
}

template <class N>
int run_solve(const SolveArgs& args) {
  using namespace dvs;
  JobSetDocument<N> doc = read_jobset_document<N>(slurp(args.input));
  double alpha = args.alpha > 0 ? args.alpha : doc.alpha.value_or(3.0);
  EnergyParams params(alpha);

  ScheduleDocument<N> out;
  if (args.model == "continuous") {
    SolveResult<N> result = solve(doc.jobs);
    out.schedule = result.schedule;
    out.energy = result.total_energy(params);
    out.stats["sschedule_calls"] = result.stats.sschedule_calls;
    out.stats["unions"] = result.stats.unions;
    out.stats["finds"] = result.stats.finds;
    std::cout << "energy " << num_to_string(*out.energy) << "\n";
    for (const auto& [id, speed] : result.job_speed)
      std::cout << "job " << id << " speed " << num_to_string(speed) << "\n";
    std::cout << "sschedule_calls " << result.stats.sschedule_calls << "\n";
  } else {
    std::vector<N> levels;
    if (!args.speeds.empty())
      levels = parse_speed_list<N>(args.speeds);
    else if (doc.speeds)
      levels = *doc.speeds;
    if (levels.empty())
      throw ParseError("discrete model needs speed levels (--speeds or document)");
    SpeedLadder<N> ladder(std::move(levels));
    DiscreteResult<N> result = solve_discrete(doc.jobs, ladder, params);
    out.schedule = result.schedule;
    out.energy = result.total_energy(params);
    out.stats["sschedule_calls"] = result.stats.sschedule_calls;
    out.stats["bipartition_rounds"] = result.stats.bipartition_rounds;
    std::cout << "energy " << num_to_string(*out.energy) << "\n";
    for (const auto& b : result.brackets) {
      std::cout << "job " << b.job << " bracket ";
      if (!b.lower)
        std::cout << "below\n";
      else
        std::cout << *b.lower << "\n";
    }
    std::cout << "sschedule_calls " << result.stats.sschedule_calls << "\n";
  }
  emit(args.output, write_schedule_document(out));
  return kExitOk;
}

struct SScheduleArgs {
  std::string input;
  std::string output;
  std::string numeric = "rational";
  std::string driver = "refined";
  std::string speed = "1";
};

template <class N>
int run_sschedule(const SScheduleArgs& args) {
  using namespace dvs;
  JobSetDocument<N> doc = read_jobset_document<N>(slurp(args.input));
  N speed = num_from_string<N>(args.speed);
  SScheduleOptions opts;
  opts.driver = args.driver == "basic" ? SScheduleDriver::kBasic
                                       : SScheduleDriver::kRefined;
  SScheduleResult<N> result = s_schedule(doc.jobs, speed, opts);

  ScheduleDocument<N> out;
  out.schedule.segments = result.segments;
  for (std::size_t i = 0; i < result.job_ids.size(); ++i)
    out.residuals[result.job_ids[i]] = result.residuals[i];
  out.unfinished = result.unfinished;
  out.stats["m"] = result.stats.m;
  out.stats["n"] = result.stats.n;
  out.stats["unions"] = result.stats.unions;
  out.stats["finds"] = result.stats.finds;
  emit(args.output, write_schedule_document(out));

  std::size_t m = result.stats.m, n = result.stats.n;
  std::uint64_t union_bound = m >= 2 ? m - 2 : 0;
  std::uint64_t find_bound = opts.driver == SScheduleDriver::kRefined
                                 ? union_bound + n
                                 : 2 * union_bound + n;
  std::cout << "unions " << result.stats.unions << " (bound " << union_bound << ")\n"
            << "finds " << result.stats.finds << " (bound " << find_bound << ")\n"
            << "unfinished " << result.unfinished.size() << "\n";
  return kExitOk;
}

template <class N>
int run_verify(const std::string& schedule_path, const std::string& jobset_path) {
  using namespace dvs;
  JobSetDocument<N> jobs = read_jobset_document<N>(slurp(jobset_path));
  ScheduleDocument<N> sched = read_schedule_document<N>(slurp(schedule_path));
  Verdict verdict = verify_feasible(sched.schedule, jobs.jobs);
  if (verdict.ok()) {
    std::cout << "ok\n";
    return kExitOk;
  }
  for (const Violation& v : verdict.violations) std::cout << v.message << "\n";
  return kExitVerification;
}

struct GenArgs {
  std::size_t n = 8;
  long resolution = 0;
  long workload_min = 0;
  long workload_max = 9;
  std::uint64_t seed = 1;
  std::string structure = "uniform";
  std::string output;
  double alpha = 0;
  std::string speeds;
};

int run_gen(const GenArgs& args) {
  using namespace dvs;
  InstanceSpec spec;
  spec.n = args.n;
  spec.resolution = args.resolution;
  spec.workload_min = args.workload_min;
  spec.workload_max = args.workload_max;
  spec.seed = args.seed;
  spec.structure = structure_from_string(args.structure);
  JobSetDocument<Rational> doc;
  doc.jobs = generate<Rational>(spec);
  if (args.alpha > 0) doc.alpha = args.alpha;
  if (!args.speeds.empty()) doc.speeds = parse_speed_list<Rational>(args.speeds);
  emit(args.output, write_jobset_document(doc));
  return kExitOk;
}

struct BenchArgs {
  std::string suite = "sschedule";
  std::vector<std::size_t> sizes;
  std::size_t reps = 3;
  std::uint64_t seed = 1;
  std::string output;
};

// Nested chain whose level speeds fall geometrically outward, so the
// average-rate split keeps peeling small top groups and the recursion depth
// grows with n.
dvs::JobSet<double> nested_adversarial(std::size_t n) {
  std::vector<dvs::Job<double>> jobs;
  jobs.reserve(n);
  double speed = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = static_cast<double>(n - 1 - i);
    double b = static_cast<double>(n + 1 + i);
    // job i is the (n-1-i)-th innermost; inner jobs are faster
    jobs.push_back({static_cast<dvs::JobId>(i + 1), a, b, speed * (b - a)});
    speed *= 1.17;
  }
  return dvs::JobSet<double>(jobs);
}

int run_bench(const BenchArgs& args) {
  using namespace dvs;
  using Clock = std::chrono::steady_clock;
  std::ostringstream csv;
  csv << "n,reps,mean_ns,unions,finds,sschedule_calls\n";
  std::vector<double> means;
  for (std::size_t n : args.sizes) {
    std::uint64_t unions = 0, finds = 0, calls = 0;
    double mean_ns = 0;
    if (args.suite == "sschedule") {
      InstanceSpec spec;
      spec.n = n;
      spec.seed = args.seed;
      spec.structure = InstanceStructure::kUniform;
      spec.workload_min = 1;
      JobSet<double> inst = generate<double>(spec);
      Ranks ranks = compute_ranks(inst);
      double speed = to_double(avr(inst));
      s_schedule(inst, speed, ranks);  // warm-up
      auto t0 = Clock::now();
      SScheduleStats last;
      for (std::size_t r = 0; r < args.reps; ++r)
        last = s_schedule(inst, speed, ranks).stats;
      auto t1 = Clock::now();
      mean_ns = std::chrono::duration<double, std::nano>(t1 - t0).count() /
                static_cast<double>(args.reps);
      unions = last.unions;
      finds = last.finds;
      calls = 1;
    } else if (args.suite == "continuous") {
      JobSet<double> inst = nested_adversarial(n);
      solve(inst);  // warm-up
      auto t0 = Clock::now();
      SolveStats last;
      for (std::size_t r = 0; r < args.reps; ++r) last = solve(inst).stats;
      auto t1 = Clock::now();
      mean_ns = std::chrono::duration<double, std::nano>(t1 - t0).count() /
                static_cast<double>(args.reps);
      unions = last.unions;
      finds = last.finds;
      calls = last.sschedule_calls;
    } else {
      throw dvs::ParseError("unknown bench suite: " + args.suite);
    }
    means.push_back(mean_ns);
    csv << n << "," << args.reps << "," << static_cast<std::uint64_t>(mean_ns)
        << "," << unions << "," << finds << "," << calls << "\n";
  }
  emit(args.output, csv.str());
  if (means.size() >= 2) {
    for (std::size_t i = 1; i < means.size(); ++i) {
      double ratio = means[i] / means[i - 1];
      double size_ratio = static_cast<double>(args.sizes[i]) /
                          static_cast<double>(args.sizes[i - 1]);
      double target = args.suite == "sschedule" ? 1.2 * size_ratio
                                                : size_ratio * size_ratio * 1.5;
      std::cout << "soft check: " << args.sizes[i - 1] << " -> " << args.sizes[i]
                << " time ratio " << ratio << (ratio <= target ? " (ok, <= " : " (above ")
                << target << ")\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum-energy voltage scheduling toolkit"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "compute an optimal schedule");
  solve_cmd->add_option("-i,--input", solve_args.input, "job set document")->required();
  solve_cmd->add_option("-o,--out", solve_args.output, "schedule document output");
  solve_cmd->add_option("--model", solve_args.model, "continuous|discrete")
      ->check(CLI::IsMember({"continuous", "discrete"}));
  solve_cmd->add_option("--numeric", solve_args.numeric, "rational|float")
      ->check(CLI::IsMember({"rational", "float"}));
  solve_cmd->add_option("--alpha", solve_args.alpha, "power exponent (default 3)");
  solve_cmd->add_option("--speeds", solve_args.speeds, "discrete levels, e.g. 3,5");

  SScheduleArgs ss_args;
  CLI::App* ss_cmd = app.add_subcommand("sschedule", "EDF at one fixed speed");
  ss_cmd->add_option("-i,--input", ss_args.input, "job set document")->required();
  ss_cmd->add_option("-o,--out", ss_args.output, "schedule document output");
  ss_cmd->add_option("--speed", ss_args.speed, "execution speed")->required();
  ss_cmd->add_option("--numeric", ss_args.numeric, "rational|float")
      ->check(CLI::IsMember({"rational", "float"}));
  ss_cmd->add_option("--driver", ss_args.driver, "refined|basic")
      ->check(CLI::IsMember({"refined", "basic"}));

  std::string verify_schedule, verify_jobset, verify_numeric = "rational";
  CLI::App* verify_cmd = app.add_subcommand("verify", "check a schedule against a job set");
  verify_cmd->add_option("--schedule", verify_schedule, "schedule document")->required();
  verify_cmd->add_option("--jobset", verify_jobset, "job set document")->required();
  verify_cmd->add_option("--numeric", verify_numeric, "rational|float")
      ->check(CLI::IsMember({"rational", "float"}));

  GenArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen_cmd->add_option("--n", gen_args.n, "job count");
  gen_cmd->add_option("--resolution", gen_args.resolution, "time grid denominator");
  gen_cmd->add_option("--workload-min", gen_args.workload_min, "minimum workload");
  gen_cmd->add_option("--workload-max", gen_args.workload_max, "maximum workload");
  gen_cmd->add_option("--seed", gen_args.seed, "random seed");
  gen_cmd->add_option("--structure", gen_args.structure,
                      "uniform|nested|laminar|disjoint-clusters");
  gen_cmd->add_option("--alpha", gen_args.alpha, "embed a power exponent");
  gen_cmd->add_option("--speeds", gen_args.speeds, "embed discrete levels");
  gen_cmd->add_option("-o,--out", gen_args.output, "output file");

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "timing and counter measurements");
  bench_cmd->add_option("--suite", bench_args.suite, "sschedule|continuous")
      ->check(CLI::IsMember({"sschedule", "continuous"}));
  bench_cmd->add_option("--sizes", bench_args.sizes, "instance sizes")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--reps", bench_args.reps, "repetitions per size");
  bench_cmd->add_option("--seed", bench_args.seed, "random seed");
  bench_cmd->add_option("--out", bench_args.output, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitParse;
  }

  try {
    if (*solve_cmd)
      return solve_args.numeric == "float" ? run_solve<double>(solve_args)
                                           : run_solve<dvs::Rational>(solve_args);
    if (*ss_cmd)
      return ss_args.numeric == "float" ? run_sschedule<double>(ss_args)
                                        : run_sschedule<dvs::Rational>(ss_args);
    if (*verify_cmd)
      return verify_numeric == "float"
                 ? run_verify<double>(verify_schedule, verify_jobset)
                 : run_verify<dvs::Rational>(verify_schedule, verify_jobset);
    if (*gen_cmd) return run_gen(gen_args);
    if (*bench_cmd) return run_bench(bench_args);
  } catch (const dvs::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    for (dvs::JobId id : e.jobs) std::cerr << "violating job " << id << "\n";
    return kExitInfeasible;
  } catch (const dvs::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}
