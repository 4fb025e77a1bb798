#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dvs/continuous_solver.hpp"
#include "dvs/discrete_solver.hpp"
#include "dvs/model.hpp"
#include "dvs/s_schedule.hpp"
#include "dvs/testkit.hpp"
#include "dvs/yds.hpp"

namespace py = pybind11;
using namespace dvs;

namespace {

JobSet<double> jobset_from_tuples(
    const std::vector<std::tuple<JobId, double, double, double>>& rows) {
  std::vector<Job<double>> jobs;
  jobs.reserve(rows.size());
  for (const auto& [id, a, b, r] : rows) jobs.push_back({id, a, b, r});
  return JobSet<double>(jobs);
}

py::dict sschedule_dict(const SScheduleResult<double>& r) {
  py::dict out;
  py::list segs;
  for (const Segment<double>& s : r.segments)
    segs.append(py::make_tuple(s.start, s.end, s.speed, s.job));
  out["segments"] = segs;
  py::dict residuals;
  for (std::size_t i = 0; i < r.job_ids.size(); ++i)
    residuals[py::int_(r.job_ids[i])] = r.residuals[i];
  out["residuals"] = residuals;
  out["unfinished"] = r.unfinished;
  out["unions"] = r.stats.unions;
  out["finds"] = r.stats.finds;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minimum-energy voltage scheduling: continuous and discrete solvers";

  py::class_<Job<double>>(m, "Job")
      .def(py::init([](JobId id, double arrival, double deadline, double workload) {
             return Job<double>{id, arrival, deadline, workload};
           }),
           py::arg("id"), py::arg("arrival"), py::arg("deadline"), py::arg("workload"))
      .def_readonly("id", &Job<double>::id)
      .def_readonly("arrival", &Job<double>::arrival)
      .def_readonly("deadline", &Job<double>::deadline)
      .def_readonly("workload", &Job<double>::workload)
      .def("__repr__", [](const Job<double>& j) {
        return "Job(" + std::to_string(j.id) + ", [" + std::to_string(j.arrival) +
               ", " + std::to_string(j.deadline) + "), " + std::to_string(j.workload) + ")";
      });

  py::class_<JobSet<double>>(m, "JobSet")
      .def(py::init<std::vector<Job<double>>>(), py::arg("jobs"))
      .def(py::init(&jobset_from_tuples), py::arg("rows"))
      .def("__len__", &JobSet<double>::size)
      .def_property_readonly("jobs", &JobSet<double>::jobs);

  py::class_<Segment<double>>(m, "Segment")
      .def_readonly("start", &Segment<double>::start)
      .def_readonly("end", &Segment<double>::end)
      .def_readonly("speed", &Segment<double>::speed)
      .def_readonly("job", &Segment<double>::job)
      .def("__repr__", [](const Segment<double>& s) {
        return "Segment([" + std::to_string(s.start) + ", " + std::to_string(s.end) +
               "), speed=" + std::to_string(s.speed) + ", job=" + std::to_string(s.job) + ")";
      });

  py::class_<Schedule<double>>(m, "Schedule")
      .def(py::init<>())
      .def_readonly("segments", &Schedule<double>::segments)
      .def("energy", [](const Schedule<double>& s, double alpha) {
        return energy(s, EnergyParams(alpha));
      }, py::arg("alpha") = 3.0);

  m.def("intensity", [](const JobSet<double>& js, double lo, double hi) {
    return intensity(js, Interval<double>{lo, hi});
  }, py::arg("jobs"), py::arg("lo"), py::arg("hi"),
     "Contained workload divided by interval length");
  m.def("support", [](const JobSet<double>& js) {
    std::vector<std::pair<double, double>> out;
    for (const Interval<double>& iv : support(js)) out.push_back({iv.lo, iv.hi});
    return out;
  });
  m.def("avr", &avr<double>, "Total workload over support length");
  m.def("verify_feasible", [](const Schedule<double>& s, const JobSet<double>& js) {
    std::vector<std::string> msgs;
    for (const Violation& v : verify_feasible(s, js).violations) msgs.push_back(v.message);
    return msgs;
  }, "Returns a list of violation messages; empty means feasible");

  m.def("s_schedule", [](const JobSet<double>& js, double speed) {
    return sschedule_dict(s_schedule(js, speed));
  }, py::arg("jobs"), py::arg("speed"),
     "EDF at one fixed speed with deadline abandonment");

  m.def("solve", [](const JobSet<double>& js) {
    SolveResult<double> r = solve(js);
    py::dict out;
    out["schedule"] = r.schedule;
    out["job_speed"] = r.job_speed;
    out["sschedule_calls"] = r.stats.sschedule_calls;
    return out;
  }, "Minimum-energy continuous schedule");

  m.def("mes_schedule", [](const JobSet<double>& js) {
    MesResult<double> r = mes_schedule(js);
    py::dict out;
    out["schedule"] = r.schedule;
    out["job_speed"] = r.job_speed;
    return out;
  }, "Critical-interval reference solver");

  m.def("solve_discrete", [](const JobSet<double>& js, std::vector<double> levels,
                             double alpha) {
    DiscreteResult<double> r = solve_discrete(js, SpeedLadder<double>(std::move(levels)),
                                              EnergyParams(alpha));
    py::dict out;
    out["schedule"] = r.schedule;
    py::dict brackets;
    for (const SpeedBracket& b : r.brackets)
      brackets[py::int_(b.job)] = b.lower ? py::cast(*b.lower) : py::none();
    out["brackets"] = brackets;
    out["bipartition_rounds"] = r.stats.bipartition_rounds;
    return out;
  }, py::arg("jobs"), py::arg("speeds"), py::arg("alpha") = 3.0,
     "Optimal schedule restricted to the given speed levels");

  m.def("two_speed_round", &two_speed_round<double>, py::arg("interval_length"),
        py::arg("work"), py::arg("s_lo"), py::arg("s_hi"),
        "Durations (t_lo, t_hi) splitting work across two adjacent speeds");

  m.def("generate", [](std::size_t n, const std::string& structure, std::uint64_t seed,
                       long resolution, long workload_min, long workload_max) {
    InstanceSpec spec;
    spec.n = n;
    spec.structure = structure_from_string(structure);
    spec.seed = seed;
    spec.resolution = resolution;
    spec.workload_min = workload_min;
    spec.workload_max = workload_max;
    return generate<double>(spec);
  }, py::arg("n"), py::arg("structure") = "uniform", py::arg("seed") = 1,
     py::arg("resolution") = 0, py::arg("workload_min") = 0,
     py::arg("workload_max") = 9,
     "Deterministic random instance on an integer time grid");

  py::register_exception<InfeasibleError>(m, "InfeasibleError");
}
