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

// syndro: fit, evaluate and benchmark syndrome definitions, or serve the
// refinement workbench over HTTP.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "syndro/http.hpp"
#include "syndro/syndro.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;

struct DataFlags {
  std::string data;
  std::string schema;
  std::string targets;
  std::string granularity = "weekly";
};

struct LearnerFlags {
  double min_support = 0.0001;
  std::size_t max_rules = 50;
  std::optional<std::size_t> max_conditions;
  std::string objective = "pearson";
  std::string semantics = "disjunctive";
  std::string blacklist_file;
  std::vector<std::string> blacklist;
  std::vector<std::string> categories;
  std::size_t max_thresholds = 0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--data", f.data, "instances file (CSV or TSV)")->required()->envname("SYNDRO_DATA");
  cmd->add_option("--schema", f.schema, "schema JSON")->required()->envname("SYNDRO_SCHEMA");
  cmd->add_option("--targets", f.targets, "bucket,count target series")->required()->envname("SYNDRO_TARGETS");
  cmd->add_option("--granularity", f.granularity, "daily, weekly or monthly")
      ->envname("SYNDRO_GRANULARITY")
      ->capture_default_str();
}

void add_learner_flags(CLI::App* cmd, LearnerFlags& f) {
  cmd->add_option("--min-support", f.min_support, "minimum support fraction s")
      ->envname("SYNDRO_MIN_SUPPORT")
      ->capture_default_str();
  cmd->add_option("--max-rules", f.max_rules, "maximum number of conjunctions L")
      ->envname("SYNDRO_MAX_RULES")
      ->capture_default_str();
  cmd->add_option("--max-conditions", f.max_conditions, "maximum conditions per conjunction M")
      ->envname("SYNDRO_MAX_CONDITIONS");
  cmd->add_option("--objective", f.objective, "pearson, spearman or kendall")
      ->envname("SYNDRO_OBJECTIVE")
      ->capture_default_str();
  cmd->add_option("--semantics", f.semantics, "disjunctive or additive")
      ->envname("SYNDRO_SEMANTICS")
      ->capture_default_str();
  cmd->add_option("--blacklist", f.blacklist_file, "file with one attribute or condition per line")
      ->envname("SYNDRO_BLACKLIST");
  cmd->add_option("--ban", f.blacklist, "blacklist entry (repeatable)");
  cmd->add_option("--categories", f.categories, "restrict candidates to these categories")
      ->delimiter(',')
      ->envname("SYNDRO_CATEGORIES");
  cmd->add_option("--max-thresholds", f.max_thresholds, "numeric thresholds per attribute (0 = all)")
      ->envname("SYNDRO_MAX_THRESHOLDS");
  cmd->add_option("--seed", f.seed, "recorded in the report")->envname("SYNDRO_SEED");
  cmd->add_option("--threads", f.threads, "worker threads")->envname("SYNDRO_THREADS")->capture_default_str();
}

syndro::LearnerConfig to_config(const LearnerFlags& f) {
  syndro::LearnerConfig c;
  c.min_support = f.min_support;
  c.max_conjunctions = f.max_rules;
  c.max_conditions = f.max_conditions;
  c.objective = syndro::parse_objective(f.objective);
  c.semantics = syndro::parse_semantics(f.semantics);
  if (!f.blacklist_file.empty()) c.blacklist = syndro::read_blacklist_file(f.blacklist_file);
  c.blacklist.insert(c.blacklist.end(), f.blacklist.begin(), f.blacklist.end());
  c.categories = f.categories;
  c.max_thresholds = f.max_thresholds;
  c.seed = f.seed;
  c.threads = f.threads == 0 ? 1 : f.threads;
  c.validate();
  return c;
}

void echo_config(const nlohmann::json& config) { std::cerr << "config " << config.dump() << '\n'; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw syndro::DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw syndro::DataError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw syndro::DataError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string syn_path_for(const std::string& report_path) {
  const auto dot = report_path.rfind('.');
  const auto slash = report_path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return report_path + ".syn";
  return report_path.substr(0, dot) + ".syn";
}

struct Loaded {
  syndro::Dataset dataset;
  syndro::TimeIndex index;
  syndro::TargetSeries targets;
};

Loaded load(const DataFlags& f) {
  const auto g = syndro::parse_granularity(f.granularity);
  auto dataset = syndro::load_dataset(f.data, f.schema);
  auto [index, targets] = syndro::build_time_index(dataset, f.targets, g);
  return {std::move(dataset), std::move(index), std::move(targets)};
}

int run_fit(const DataFlags& df, const LearnerFlags& lf, const std::string& out) {
  const auto config = to_config(lf);
  const auto input = load(df);
  syndro::resolve_blacklist(config, input.dataset.schema());
  auto echoed = syndro::to_json(config);
  echoed["granularity"] = df.granularity;
  echoed["threads"] = config.threads;
  echoed["support_floor"] = syndro::support_floor(input.index.retained(), config.min_support);
  echo_config(echoed);

  const auto& schema = input.dataset.schema();
  const auto report = syndro::fit(input.dataset, input.index, input.targets, config, [&](const auto& e) {
    std::cerr << "+ " << syndro::format_conjunction(e.conjunction, schema) << "  support=" << e.support
              << "  score=" << e.score_after << '\n';
  });
  write_file(out, syndro::to_json(report, schema).dump(2) + "\n");
  const auto syn = syn_path_for(out);
  write_file(syn, syndro::format_syndrome(report.syndrome, schema) + "\n");

  std::cout << syndro::format_syndrome(report.syndrome, schema) << '\n';
  std::printf("%s %.6f over %zu buckets, %zu conjunctions\n", syndro::to_string(config.objective).c_str(),
              report.score.value, report.counts.size(), report.syndrome.size());
  std::cout << "wrote " << out << " and " << syn << '\n';
  return kOk;
}

int run_eval(const DataFlags& df, const std::string& syndrome_file, const std::string& semantics, bool json) {
  const auto sem = syndro::parse_semantics(semantics);
  const auto input = load(df);
  echo_config({{"granularity", df.granularity}, {"semantics", syndro::to_string(sem)}, {"syndrome", syndrome_file}});
  const auto& schema = input.dataset.schema();
  const auto syn = syndro::parse_syndrome(read_file(syndrome_file), schema);
  const auto counts = syndro::count_series(syn, input.dataset, input.index, sem);
  const auto scores = syndro::all_scores(input.targets.counts, counts);
  if (json) {
    std::cout << nlohmann::json{{"syndrome", syndro::format_syndrome(syn, schema)},
                                {"labels", input.index.labels()},
                                {"targets", input.targets.counts},
                                {"counts", counts},
                                {"scores", scores}}
                     .dump(2)
              << '\n';
    return kOk;
  }
  std::cout << "bucket\ttarget\tcount\n";
  for (std::size_t t = 0; t < counts.size(); ++t)
    std::cout << input.index.labels()[t] << '\t' << input.targets.counts[t] << '\t' << counts[t] << '\n';
  for (const char* k : {"pearson", "spearman", "kendall"}) std::printf("%-9s %.6f\n", k, scores[k].get<double>());
  return kOk;
}

struct BenchFlags {
  std::vector<std::string> types{"and", "or", "and-or"};
  std::vector<std::string> granularities{"daily", "weekly", "monthly"};
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t instances = 100000;
  std::size_t attributes = 30;
  std::size_t values = 5;
  std::optional<std::size_t> size;
  double noise = 0.0;
  std::string out;
  bool details = false;
};

int run_bench(const BenchFlags& bf, const LearnerFlags& lf) {
  syndro::BenchmarkOptions o;
  o.types.clear();
  for (const auto& t : bf.types) o.types.push_back(syndro::parse_syndrome_type(t));
  o.granularities.clear();
  for (const auto& g : bf.granularities) o.granularities.push_back(syndro::parse_granularity(g));
  o.trials = bf.trials;
  o.seed = bf.seed;
  o.instances = bf.instances;
  o.attributes = bf.attributes;
  o.values = bf.values;
  o.size = bf.size;
  o.noise = bf.noise;
  o.learner = to_config(lf);
  o.threads = o.learner.threads;

  nlohmann::json echoed = syndro::to_json(o.learner);
  echoed["types"] = bf.types;
  echoed["granularities"] = bf.granularities;
  echoed["trials"] = bf.trials;
  echoed["seed"] = bf.seed;
  echoed["instances"] = bf.instances;
  echoed["attributes"] = bf.attributes;
  echoed["values"] = bf.values;
  echoed["noise"] = bf.noise;
  echoed["threads"] = o.threads;
  echo_config(echoed);

  const auto dataset = syndro::benchmark_dataset(o);
  const auto report = syndro::run_benchmark(dataset, o);
  std::cout << syndro::format_table(report);
  if (!bf.out.empty()) write_file(bf.out, syndro::to_json(report, dataset.schema(), bf.details).dump(2) + "\n");
  return kOk;
}

int run_serve(const DataFlags& df, const std::string& name, const std::string& host, int port,
              const std::string& store, const LearnerFlags& lf) {
  syndro::Workbench::Options options;
  if (!store.empty()) options.store = store;
  options.defaults = to_config(lf);
  syndro::Workbench bench(options);
  auto input = load(df);
  echo_config({{"dataset", name}, {"host", host}, {"port", port}, {"store", store},
               {"granularity", df.granularity}, {"defaults", syndro::to_json(options.defaults)}});
  bench.register_dataset(name, std::move(input.dataset), std::move(input.targets));
  bench.restore();
  std::cerr << "listening on " << host << ':' << port << '\n';
  if (!syndro::serve(bench, host, port)) throw syndro::ConfigError("cannot listen on " + host + ":" + std::to_string(port));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn and evaluate syndrome definitions from time-stamped records"};
  app.require_subcommand(1);

  DataFlags data;
  LearnerFlags learner;

  auto* fit = app.add_subcommand("fit", "learn a DNF syndrome that tracks the target series");
  add_data_flags(fit, data);
  add_learner_flags(fit, learner);
  std::string out = "report.json";
  fit->add_option("--out", out, "report path; the syndrome goes next to it as .syn")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "count series and scores of a given syndrome");
  add_data_flags(eval, data);
  std::string syndrome_file;
  std::string semantics = "disjunctive";
  bool eval_json = false;
  eval->add_option("--syndrome", syndrome_file, "syndrome file")->required()->check(CLI::ExistingFile);
  eval->add_option("--semantics", semantics, "disjunctive or additive")->capture_default_str();
  eval->add_flag("--json", eval_json, "print JSON instead of a table");

  auto* bench = app.add_subcommand("synth-bench", "reconstruction benchmark on synthetic data");
  BenchFlags bf;
  add_learner_flags(bench, learner);
  bench->add_option("--type", bf.types, "and, or, and-or (repeatable)")->delimiter(',')->capture_default_str();
  bench->add_option("--granularity", bf.granularities, "daily, weekly, monthly (repeatable)")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--trials", bf.trials, "trials per type")->capture_default_str();
  bench->add_option("--instances", bf.instances)->capture_default_str();
  bench->add_option("--attributes", bf.attributes)->capture_default_str();
  bench->add_option("--values", bf.values, "values per attribute")->capture_default_str();
  bench->add_option("--size", bf.size, "fixed planted size for every trial");
  bench->add_option("--noise", bf.noise, "Poisson noise rate relative to the mean count")->capture_default_str();
  bench->add_option("--out", bf.out, "benchmark report JSON");
  bench->add_flag("--details", bf.details, "include every trial in the report");

  auto* serve = app.add_subcommand("serve", "HTTP service for the refinement workbench");
  add_data_flags(serve, data);
  add_learner_flags(serve, learner);
  std::string name = "default";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store;
  serve->add_option("--name", name, "dataset name")->capture_default_str();
  serve->add_option("--host", host)->envname("SYNDRO_HOST")->capture_default_str();
  serve->add_option("--port", port)->envname("SYNDRO_PORT")->capture_default_str();
  serve->add_option("--store", store, "append-only session log")->envname("SYNDRO_STORE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (fit->parsed()) return run_fit(data, learner, out);
    if (eval->parsed()) return run_eval(data, syndrome_file, semantics, eval_json);
    if (bench->parsed()) {
      // --seed drives dataset generation and planting here.
      if (bench->count("--seed")) bf.seed = learner.seed;
      return run_bench(bf, learner);
    }
    if (serve->parsed()) return run_serve(data, name, host, port, store, learner);
  } catch (const syndro::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const syndro::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
