// Copyright 2026 The Syndro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Refinement workbench: sessions over registered datasets, asynchronous fit
// jobs and syndrome evaluation, exposed as JSON request handling that is
// independent of the HTTP transport (see http.hpp).

#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "syndro/dataset.hpp"
#include "syndro/dsl.hpp"
#include "syndro/error.hpp"
#include "syndro/learner.hpp"
#include "syndro/report.hpp"
#include "syndro/syndrome.hpp"
#include "syndro/time_index.hpp"

namespace syndro {

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

enum class JobState { queued, running, done, failed };

inline std::string to_string(JobState s) {
  switch (s) {
    case JobState::queued:
      return "queued";
    case JobState::running:
      return "running";
    case JobState::done:
      return "done";
    case JobState::failed:
      return "failed";
  }
  return "failed";
}

namespace detail {

inline std::string url_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out.push_back(' ');
    } else if (s[i] == '%' && i + 2 < s.size()) {
      auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
      };
      const int hi = hex(s[i + 1]), lo = hex(s[i + 2]);
      if (hi < 0 || lo < 0) {
        out.push_back(s[i]);
        continue;
      }
      out.push_back(static_cast<char>(hi * 16 + lo));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

inline std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = i;
    while (j < path.size() && path[j] != '/') ++j;
    if (j > i) out.push_back(url_decode(path.substr(i, j - i)));
    i = j;
  }
  return out;
}

inline std::map<std::string, std::string> parse_query(std::string_view q) {
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  while (i <= q.size() && !q.empty()) {
    std::size_t j = q.find('&', i);
    if (j == std::string_view::npos) j = q.size();
    const auto part = q.substr(i, j - i);
    if (!part.empty()) {
      const auto eq = part.find('=');
      if (eq == std::string_view::npos)
        out[url_decode(part)] = "";
      else
        out[url_decode(part.substr(0, eq))] = url_decode(part.substr(eq + 1));
    }
    if (j == q.size()) break;
    i = j + 1;
  }
  return out;
}

/// Thrown inside request handling and turned into an error response.
struct ApiError {
  int status;
  std::string code;
  std::string message;
  std::optional<std::size_t> line;
  std::optional<std::size_t> column;
};

}  // namespace detail

class Workbench {
 public:
  struct Options {
    /// Append-only session log; nothing is persisted when empty.
    std::optional<std::filesystem::path> store;
    LearnerConfig defaults;
    std::string cors_origin = "*";
    /// Run fits on background threads (otherwise inline, before responding).
    bool async = true;
    /// Called on the worker thread before a fit starts, without the lock held.
    std::function<void(const std::string& job)> on_job_start;
  };

  explicit Workbench(Options options) : options_(std::move(options)) {}
  Workbench() : Workbench(Options{}) {}

  Workbench(const Workbench&) = delete;
  Workbench& operator=(const Workbench&) = delete;

  ~Workbench() { wait_idle(); }

  const Options& options() const noexcept { return options_; }

  void register_dataset(std::string name, Dataset dataset, TargetSeries targets) {
    auto entry = std::make_shared<Registered>(Registered{name, std::move(dataset), std::move(targets), std::nullopt});
    entry->index.emplace(entry->dataset, entry->targets.granularity, entry->targets.first_key,
                         entry->targets.size());
    std::lock_guard lock(mutex_);
    datasets_[std::move(name)] = std::move(entry);
  }

  /// Replays the session log. Call after every dataset has been registered.
  void restore() {
    if (!options_.store || !std::filesystem::exists(*options_.store)) return;
    std::ifstream in(*options_.store);
    std::string line;
    std::lock_guard lock(mutex_);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json ev;
      try {
        ev = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        continue;  // torn final line
      }
      replay(ev);
    }
  }

  /// Blocks until every fit job has finished.
  void wait_idle() {
    std::vector<std::thread> workers;
    {
      std::lock_guard lock(mutex_);
      workers.swap(workers_);
    }
    for (auto& w : workers)
      if (w.joinable()) w.join();
  }

  HttpResponse handle(std::string_view method, std::string_view target, std::string_view body) {
    try {
      const auto qpos = target.find('?');
      const auto path = detail::split_path(target.substr(0, qpos));
      const auto query = qpos == std::string_view::npos ? std::map<std::string, std::string>{}
                                                        : detail::parse_query(target.substr(qpos + 1));
      if (method == "OPTIONS") return {204, "", "text/plain"};
      return route(method, path, query, body);
    } catch (const detail::ApiError& e) {
      nlohmann::json err{{"code", e.code}, {"message", e.message}};
      if (e.line) err["line"] = *e.line;
      if (e.column) err["column"] = *e.column;
      return {e.status, nlohmann::json{{"error", err}}.dump()};
    } catch (const std::exception& e) {
      return {500, nlohmann::json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump()};
    }
  }

 private:
  struct Registered {
    std::string name;
    Dataset dataset;
    TargetSeries targets;
    std::optional<TimeIndex> index;
  };

  struct Job {
    std::string id;
    std::string session;
    JobState state = JobState::queued;
    LearnerConfig config;
    nlohmann::json trace = nlohmann::json::array();
    std::optional<FitReport> report;
    nlohmann::json report_json;
    std::string error;
  };

  struct Session {
    std::string id;
    std::string dataset;
    std::vector<std::string> blacklist;
    std::map<std::string, std::string> pins;
    std::optional<std::string> last_job;
    std::optional<std::string> active_job;
  };

  using Json = nlohmann::json;
  using Path = std::vector<std::string>;
  using Query = std::map<std::string, std::string>;

  [[noreturn]] static void fail(int status, std::string code, std::string message) {
    throw detail::ApiError{status, std::move(code), std::move(message), std::nullopt, std::nullopt};
  }

  static HttpResponse ok(const Json& j, int status = 200) { return {status, j.dump()}; }

  static Json parse_json_body(std::string_view body) {
    if (body.empty()) return Json::object();
    try {
      return Json::parse(body);
    } catch (const Json::exception& e) {
      fail(400, "invalid_request", std::string("body is not valid JSON: ") + e.what());
    }
  }

  HttpResponse route(std::string_view method, const Path& p, const Query& q, std::string_view body) {
    if (p.size() < 2 || p[0] != "api") fail(404, "not_found", "no such endpoint");
    std::lock_guard lock(mutex_);
    if (p[1] == "datasets" && p.size() == 2 && method == "GET") return list_datasets();
    if (p[1] == "jobs" && p.size() == 3) {
      if (method != "GET") fail(405, "method_not_allowed", "jobs are read-only");
      return get_job(p[2]);
    }
    if (p[1] != "sessions") fail(404, "not_found", "no such endpoint");
    if (p.size() == 2) {
      if (method != "POST") fail(405, "method_not_allowed", "use POST to create a session");
      return create_session(parse_json_body(body));
    }
    Session& s = session(p[2]);
    if (p.size() == 3) {
      if (method != "GET") fail(405, "method_not_allowed", "sessions are read with GET");
      return ok(session_json(s));
    }
    const std::string& action = p[3];
    if (action == "fit" && p.size() == 4 && method == "POST") return enqueue_fit(s, parse_json_body(body));
    if (action == "evaluate" && p.size() == 4 && method == "POST") return evaluate(s, body, q);
    if (action == "series" && p.size() == 4 && method == "GET") return series(s, q);
    if (action == "blacklist" && p.size() == 4 && method == "PUT")
      return put_blacklist(s, parse_json_body(body));
    if (action == "blacklist" && p.size() == 4 && method == "GET") return ok(Json{{"blacklist", s.blacklist}});
    if (action == "pins" && p.size() == 5 && method == "PUT") return put_pin(s, p[4], body);
    if (action == "pins" && p.size() == 5 && method == "DELETE") return delete_pin(s, p[4]);
    fail(404, "not_found", "no such endpoint");
  }

  HttpResponse list_datasets() const {
    Json out = Json::array();
    for (const auto& [name, d] : datasets_)
      out.push_back(Json{{"name", name},
                         {"instances", d->dataset.size()},
                         {"granularity", to_string(d->targets.granularity)},
                         {"buckets", d->targets.size()},
                         {"schema", d->dataset.schema().to_json()}});
    return ok(Json{{"datasets", out}});
  }

  Registered& dataset_of(const Session& s) const {
    auto it = datasets_.find(s.dataset);
    if (it == datasets_.end()) fail(404, "not_found", "dataset '" + s.dataset + "' is not registered");
    return *it->second;
  }

  Session& session(const std::string& id) {
    auto it = sessions_.find(id);
    if (it == sessions_.end()) fail(404, "not_found", "unknown session '" + id + "'");
    return it->second;
  }

  Json session_json(const Session& s) const {
    return Json{{"id", s.id},
                {"dataset", s.dataset},
                {"granularity", to_string(dataset_of(s).targets.granularity)},
                {"blacklist", s.blacklist},
                {"pins", s.pins},
                {"last_job", s.last_job ? Json(*s.last_job) : Json(nullptr)},
                {"active_job", s.active_job ? Json(*s.active_job) : Json(nullptr)}};
  }

  HttpResponse create_session(const Json& body) {
    std::string name;
    if (body.contains("dataset")) {
      if (!body["dataset"].is_string()) fail(400, "invalid_request", "'dataset' must be a string");
      name = body["dataset"].get<std::string>();
    } else if (datasets_.size() == 1) {
      name = datasets_.begin()->first;
    } else {
      fail(400, "invalid_request", "specify 'dataset'");
    }
    if (!datasets_.count(name)) fail(404, "not_found", "dataset '" + name + "' is not registered");
    Session s;
    s.id = "s-" + std::to_string(++session_counter_);
    s.dataset = name;
    log(Json{{"event", "session"}, {"id", s.id}, {"dataset", name}});
    auto& stored = sessions_[s.id] = std::move(s);
    return ok(session_json(stored), 201);
  }

  HttpResponse put_blacklist(Session& s, const Json& body) {
    const Json& entries = body.is_object() && body.contains("blacklist") ? body["blacklist"] : body;
    if (!entries.is_array()) fail(400, "invalid_config", "blacklist must be an array of entries");
    std::vector<std::string> list;
    for (const auto& e : entries) {
      if (!e.is_string()) fail(400, "invalid_config", "blacklist entries must be strings");
      list.push_back(e.get<std::string>());
    }
    try {
      Blacklist::parse(list, dataset_of(s).dataset.schema());
    } catch (const ConfigError& e) {
      fail(400, "invalid_config", e.what());
    }
    s.blacklist = std::move(list);
    log(Json{{"event", "blacklist"}, {"session", s.id}, {"entries", s.blacklist}});
    return ok(Json{{"blacklist", s.blacklist}});
  }

  Syndrome parse_or_fail(std::string_view text, const Schema& schema) const {
    try {
      return parse_syndrome(text, schema);
    } catch (const SyntaxError& e) {
      throw detail::ApiError{400, "invalid_dsl", e.what(), e.line(), e.column()};
    }
  }

  HttpResponse put_pin(Session& s, const std::string& name, std::string_view body) {
    const Syndrome syn = parse_or_fail(body, dataset_of(s).dataset.schema());
    s.pins[name] = std::string(body);
    log(Json{{"event", "pin"}, {"session", s.id}, {"name", name}, {"text", s.pins[name]}});
    return ok(Json{{"name", name}, {"syndrome", format_syndrome(syn, dataset_of(s).dataset.schema())}});
  }

  HttpResponse delete_pin(Session& s, const std::string& name) {
    if (!s.pins.erase(name)) fail(404, "not_found", "no pinned syndrome '" + name + "'");
    log(Json{{"event", "unpin"}, {"session", s.id}, {"name", name}});
    return ok(Json{{"deleted", name}});
  }

  Json series_json(const Registered& d, const CountSeries& counts) const {
    return Json{{"labels", d.index->labels()},
                {"counts", counts},
                {"scores", all_scores(d.targets.counts, counts)}};
  }

  HttpResponse evaluate(Session& s, std::string_view body, const Query& q) {
    const Registered& d = dataset_of(s);
    const Syndrome syn = parse_or_fail(body, d.dataset.schema());
    Semantics sem = Semantics::disjunctive;
    if (auto it = q.find("semantics"); it != q.end()) {
      try {
        sem = parse_semantics(it->second);
      } catch (const ConfigError& e) {
        fail(400, "invalid_config", e.what());
      }
    }
    const auto counts = count_series(syn, d.dataset, *d.index, sem);
    Json out = series_json(d, counts);
    out["syndrome"] = format_syndrome(syn, d.dataset.schema());
    out["semantics"] = to_string(sem);
    out["support"] = coverage(syn, d.dataset).count();
    return ok(out);
  }

  HttpResponse series(Session& s, const Query& q) {
    const Registered& d = dataset_of(s);
    auto it = q.find("which");
    const std::string which = it == q.end() ? "target" : it->second;
    if (which == "target")
      return ok(Json{{"which", which}, {"labels", d.index->labels()}, {"counts", d.targets.counts}});
    if (which == "learned") {
      if (!s.last_job) fail(404, "not_found", "the session has no completed fit");
      const Job& job = jobs_.at(*s.last_job);
      const FitReport& r = *job.report;
      Json out = series_json(d, r.counts);
      out["which"] = which;
      out["job"] = job.id;
      out["syndrome"] = format_syndrome(r.syndrome, d.dataset.schema());
      // Cumulative counts after each learned conjunction, earliest first.
      Json layers = Json::array();
      Syndrome prefix;
      for (const auto& conj : r.syndrome.conjunctions()) {
        prefix.append(conj);
        layers.push_back(count_series(prefix, d.dataset, *d.index, r.config.semantics));
      }
      out["layers"] = std::move(layers);
      return ok(out);
    }
    if (which.rfind("pinned:", 0) == 0) {
      const std::string name = which.substr(7);
      auto pin = s.pins.find(name);
      if (pin == s.pins.end()) fail(404, "not_found", "no pinned syndrome '" + name + "'");
      const Syndrome syn = parse_or_fail(pin->second, d.dataset.schema());
      Json out = series_json(d, count_series(syn, d.dataset, *d.index));
      out["which"] = which;
      out["syndrome"] = format_syndrome(syn, d.dataset.schema());
      return ok(out);
    }
    fail(400, "invalid_request", "which must be target, learned or pinned:<name>");
  }

  HttpResponse enqueue_fit(Session& s, const Json& delta) {
    if (s.active_job) fail(409, "conflict", "a fit is already running in this session");
    LearnerConfig config;
    try {
      Json without_blacklist = delta;
      std::vector<std::string> extra;
      if (delta.is_object() && delta.contains("blacklist")) {
        extra = delta["blacklist"].get<std::vector<std::string>>();
        without_blacklist.erase("blacklist");
      }
      config = apply_config(options_.defaults, without_blacklist);
      config.blacklist = s.blacklist;
      config.blacklist.insert(config.blacklist.end(), extra.begin(), extra.end());
      config.validate();
      resolve_blacklist(config, dataset_of(s).dataset.schema());
    } catch (const ConfigError& e) {
      fail(400, "invalid_config", e.what());
    } catch (const Json::exception& e) {
      fail(400, "invalid_config", e.what());
    }

    Job job;
    job.id = "j-" + std::to_string(++job_counter_);
    job.session = s.id;
    job.config = config;
    const std::string id = job.id;
    jobs_[id] = std::move(job);
    s.active_job = id;

    auto data = datasets_.at(s.dataset);
    if (options_.async)
      workers_.emplace_back([this, id, data, config] { run_job(id, data, config); });
    else
      run_job_locked(id, data, config);
    return ok(Json{{"job", id}, {"state", to_string(jobs_.at(id).state)}}, 202);
  }

  void run_job(const std::string& id, std::shared_ptr<Registered> data, LearnerConfig config) {
    if (options_.on_job_start) options_.on_job_start(id);
    {
      std::lock_guard lock(mutex_);
      jobs_.at(id).state = JobState::running;
    }
    std::optional<FitReport> report;
    std::string error;
    try {
      report = fit(data->dataset, *data->index, data->targets, config, [&](const TraceEntry& e) {
        std::lock_guard lock(mutex_);
        jobs_.at(id).trace.push_back(trace_json(e, data->dataset.schema()));
      });
    } catch (const std::exception& e) {
      error = e.what();
    }
    std::lock_guard lock(mutex_);
    finish(id, data, std::move(report), error);
  }

  // Synchronous variant used when options_.async is false; mutex_ is held.
  void run_job_locked(const std::string& id, std::shared_ptr<Registered> data, LearnerConfig config) {
    jobs_.at(id).state = JobState::running;
    std::optional<FitReport> report;
    std::string error;
    try {
      report = fit(data->dataset, *data->index, data->targets, config, [&](const TraceEntry& e) {
        jobs_.at(id).trace.push_back(trace_json(e, data->dataset.schema()));
      });
    } catch (const std::exception& e) {
      error = e.what();
    }
    finish(id, data, std::move(report), error);
  }

  static Json trace_json(const TraceEntry& e, const Schema& schema) {
    return Json{{"conjunction", format_conjunction(e.conjunction, schema)},
                {"support", e.support},
                {"newly_covered", e.newly_covered},
                {"score_before", e.score_before},
                {"score_after", e.score_after}};
  }

  void finish(const std::string& id, const std::shared_ptr<Registered>& data, std::optional<FitReport> report,
              const std::string& error) {
    Job& job = jobs_.at(id);
    if (report) {
      job.report_json = to_json(*report, data->dataset.schema());
      job.report = std::move(report);
      job.state = JobState::done;
    } else {
      job.error = error;
      job.state = JobState::failed;
    }
    auto s = sessions_.find(job.session);
    if (s != sessions_.end()) {
      s->second.active_job.reset();
      if (job.state == JobState::done) s->second.last_job = id;
    }
    Json ev{{"event", "job"}, {"id", id}, {"session", job.session}, {"state", to_string(job.state)},
            {"config", to_json(job.config)}};
    if (job.state == JobState::done)
      ev["report"] = job.report_json;
    else
      ev["error"] = job.error;
    log(ev);
  }

  HttpResponse get_job(const std::string& id) const {
    auto it = jobs_.find(id);
    if (it == jobs_.end()) fail(404, "not_found", "unknown job '" + id + "'");
    const Job& j = it->second;
    Json out{{"id", j.id},
             {"session", j.session},
             {"state", to_string(j.state)},
             {"progress", j.trace.size()},
             {"trace", j.trace},
             {"config", to_json(j.config)}};
    if (j.state == JobState::done) out["result"] = j.report_json;
    if (j.state == JobState::failed) out["error"] = j.error;
    return ok(out);
  }

  void log(const Json& event) {
    if (!options_.store) return;
    std::ofstream out(*options_.store, std::ios::app);
    out << event.dump() << '\n';
  }

  static std::size_t counter_of(const std::string& id) {
    const auto dash = id.find('-');
    if (dash == std::string::npos) return 0;
    try {
      return std::stoul(id.substr(dash + 1));
    } catch (const std::exception&) {
      return 0;
    }
  }

  // Rebuilds one logged event; mutex_ is held.
  void replay(const Json& ev) {
    const std::string type = ev.value("event", "");
    if (type == "session") {
      Session s;
      s.id = ev.value("id", "");
      s.dataset = ev.value("dataset", "");
      if (!datasets_.count(s.dataset)) return;
      session_counter_ = std::max(session_counter_, counter_of(s.id));
      sessions_[s.id] = std::move(s);
      return;
    }
    auto sit = sessions_.find(ev.value("session", ""));
    if (sit == sessions_.end()) return;
    Session& s = sit->second;
    if (type == "blacklist") {
      s.blacklist = ev.value("entries", std::vector<std::string>{});
    } else if (type == "pin") {
      s.pins[ev.value("name", "")] = ev.value("text", "");
    } else if (type == "unpin") {
      s.pins.erase(ev.value("name", ""));
    } else if (type == "job") {
      Job job;
      job.id = ev.value("id", "");
      job.session = s.id;
      job_counter_ = std::max(job_counter_, counter_of(job.id));
      const Registered& d = dataset_of(s);
      if (ev.contains("config")) {
        try {
          job.config = apply_config(LearnerConfig{}, ev["config"]);
        } catch (const ConfigError&) {
        }
      }
      if (ev.value("state", "") == "done" && ev.contains("report")) {
        job.report_json = ev["report"];
        FitReport r;
        r.config = job.config;
        r.syndrome = parse_syndrome(job.report_json["syndrome"]["text"].get<std::string>(), d.dataset.schema());
        r.counts = job.report_json["counts"].get<CountSeries>();
        r.labels = job.report_json["labels"].get<std::vector<std::string>>();
        r.score.value = job.report_json["score"]["value"].get<double>();
        r.score.degenerate = job.report_json["score"]["degenerate"].get<bool>();
        job.trace = job.report_json["trace"];
        job.report = std::move(r);
        job.state = JobState::done;
        s.last_job = job.id;
      } else {
        job.state = JobState::failed;
        job.error = ev.value("error", "");
      }
      jobs_[job.id] = std::move(job);
    }
  }

  Options options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Registered>> datasets_;
  std::map<std::string, Session> sessions_;
  std::map<std::string, Job> jobs_;
  std::vector<std::thread> workers_;
  std::size_t session_counter_ = 0;
  std::size_t job_counter_ = 0;
};

}  // namespace syndro
