#ifndef DVS_IO_HPP
#define DVS_IO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dvs/model.hpp"

namespace dvs {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io_detail {

using OJson = nlohmann::ordered_json;

template <class N>
N number_from(const OJson& v, const std::string& path) {
  try {
    if (v.is_string()) return num_from_string<N>(v.get<std::string>());
    if (v.is_number_integer()) return N(static_cast<long>(v.get<std::int64_t>()));
    if (v.is_number_float()) return N(v.get<double>());
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  throw ParseError(path + ": expected a number or a numeric string");
}

inline const OJson& field(const OJson& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing field");
  return *it;
}

}  // namespace io_detail

// On-disk instance: schema version, jobs, optional power exponent and
// optional discrete speed levels. Numeric fields are written as strings so
// the exact-rational reader sees the literal digits; plain JSON numbers are
// accepted on input.
template <class N>
struct JobSetDocument {
  std::string schema_version = "1";
  JobSet<N> jobs;
  std::optional<double> alpha;
  std::optional<std::vector<N>> speeds;
};

template <class N>
JobSetDocument<N> read_jobset_document(const std::string& text) {
  namespace d = io_detail;
  d::OJson doc;
  try {
    doc = d::OJson::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  JobSetDocument<N> out;
  if (doc.contains("schema_version")) {
    if (!doc["schema_version"].is_string())
      throw ParseError("schema_version: expected a string");
    out.schema_version = doc["schema_version"].get<std::string>();
  }
  const d::OJson& jobs = d::field(doc, "jobs", "document");
  if (!jobs.is_array()) throw ParseError("jobs: expected an array");
  std::vector<Job<N>> parsed;
  parsed.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::string path = "jobs[" + std::to_string(i) + "]";
    const d::OJson& j = jobs[i];
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    const d::OJson& idv = d::field(j, "id", path);
    if (!idv.is_number_integer()) throw ParseError(path + ".id: expected an integer");
    Job<N> job;
    job.id = idv.get<std::int64_t>();
    job.arrival = d::number_from<N>(d::field(j, "arrival", path), path + ".arrival");
    job.deadline = d::number_from<N>(d::field(j, "deadline", path), path + ".deadline");
    job.workload = d::number_from<N>(d::field(j, "workload", path), path + ".workload");
    if (!(job.arrival < job.deadline))
      throw ParseError(path + ".deadline: must be greater than arrival");
    if (job.workload < N(0))
      throw ParseError(path + ".workload: must be nonnegative");
    parsed.push_back(std::move(job));
  }
  try {
    out.jobs = JobSet<N>(std::move(parsed));
  } catch (const std::exception& e) {
    throw ParseError(std::string("jobs: ") + e.what());
  }
  if (doc.contains("alpha") && !doc["alpha"].is_null()) {
    const d::OJson& a = doc["alpha"];
    double alpha = 0;
    if (a.is_number())
      alpha = a.get<double>();
    else if (a.is_string())
      alpha = to_double(num_from_string<double>(a.get<std::string>()));
    else
      throw ParseError("alpha: expected a number");
    if (!(alpha >= 2.0)) throw ParseError("alpha: must be at least 2");
    out.alpha = alpha;
  }
  if (doc.contains("speeds") && !doc["speeds"].is_null()) {
    const d::OJson& sp = doc["speeds"];
    if (!sp.is_array()) throw ParseError("speeds: expected an array");
    std::vector<N> levels;
    for (std::size_t i = 0; i < sp.size(); ++i)
      levels.push_back(
          io_detail::number_from<N>(sp[i], "speeds[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
      if (!(levels[i] < levels[i + 1]))
        throw ParseError("speeds: must be strictly increasing");
    if (!levels.empty() && !(levels[0] > N(0)))
      throw ParseError("speeds: must be positive");
    out.speeds = std::move(levels);
  }
  return out;
}

template <class N>
std::string write_jobset_document(const JobSetDocument<N>& doc) {
  namespace d = io_detail;
  d::OJson out;
  out["schema_version"] = doc.schema_version;
  out["jobs"] = d::OJson::array();
  for (const Job<N>& j : doc.jobs.jobs()) {
    d::OJson job;
    job["id"] = j.id;
    job["arrival"] = num_to_string(j.arrival);
    job["deadline"] = num_to_string(j.deadline);
    job["workload"] = num_to_string(j.workload);
    out["jobs"].push_back(std::move(job));
  }
  if (doc.alpha) out["alpha"] = *doc.alpha;
  if (doc.speeds) {
    d::OJson levels = d::OJson::array();
    for (const N& s : *doc.speeds) levels.push_back(num_to_string(s));
    out["speeds"] = std::move(levels);
  }
  return out.dump(2) + "\n";
}

template <class N>
struct ScheduleDocument {
  std::string schema_version = "1";
  Schedule<N> schedule;
  std::optional<N> energy;
  std::map<std::string, std::uint64_t> stats;
  std::map<JobId, N> residuals;      // s-schedule outputs only
  std::vector<JobId> unfinished;     // s-schedule outputs only
};

template <class N>
ScheduleDocument<N> read_schedule_document(const std::string& text) {
  namespace d = io_detail;
  d::OJson doc;
  try {
    doc = d::OJson::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  ScheduleDocument<N> out;
  const d::OJson& segs = d::field(doc, "segments", "document");
  if (!segs.is_array()) throw ParseError("segments: expected an array");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    std::string path = "segments[" + std::to_string(i) + "]";
    const d::OJson& s = segs[i];
    Segment<N> seg;
    seg.start = d::number_from<N>(d::field(s, "start", path), path + ".start");
    seg.end = d::number_from<N>(d::field(s, "end", path), path + ".end");
    seg.speed = d::number_from<N>(d::field(s, "speed", path), path + ".speed");
    const d::OJson& job = d::field(s, "job", path);
    if (job.is_string() && job.get<std::string>() == "idle")
      seg.job = kIdleJob;
    else if (job.is_number_integer())
      seg.job = job.get<std::int64_t>();
    else
      throw ParseError(path + ".job: expected an integer or \"idle\"");
    if (!(seg.start < seg.end)) throw ParseError(path + ": start must precede end");
    out.schedule.segments.push_back(std::move(seg));
  }
  if (doc.contains("energy") && !doc["energy"].is_null())
    out.energy = d::number_from<N>(doc["energy"], "energy");
  return out;
}

template <class N>
std::string write_schedule_document(const ScheduleDocument<N>& doc) {
  namespace d = io_detail;
  d::OJson out;
  out["schema_version"] = doc.schema_version;
  out["segments"] = d::OJson::array();
  for (const Segment<N>& s : doc.schedule.segments) {
    d::OJson seg;
    seg["start"] = num_to_string(s.start);
    seg["end"] = num_to_string(s.end);
    seg["speed"] = num_to_string(s.speed);
    if (s.idle())
      seg["job"] = "idle";
    else
      seg["job"] = s.job;
    out["segments"].push_back(std::move(seg));
  }
  if (doc.energy) out["energy"] = num_to_string(*doc.energy);
  if (!doc.residuals.empty()) {
    d::OJson res = d::OJson::object();
    for (const auto& [id, r] : doc.residuals) res[std::to_string(id)] = num_to_string(r);
    out["residuals"] = std::move(res);
  }
  if (!doc.unfinished.empty()) {
    d::OJson unf = d::OJson::array();
    for (JobId id : doc.unfinished) unf.push_back(id);
    out["unfinished"] = std::move(unf);
  }
  if (!doc.stats.empty()) {
    d::OJson st = d::OJson::object();
    for (const auto& [key, value] : doc.stats) st[key] = value;
    out["stats"] = std::move(st);
  }
  return out.dump(2) + "\n";
}

}  // namespace dvs

#endif  // DVS_IO_HPP
