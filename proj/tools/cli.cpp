// Copyright 2026 The cohortig Authors.
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

#include "cli.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "cohortig/attribution_io.hpp"
#include "cohortig/config.hpp"
#include "cohortig/dataset.hpp"
#include "cohortig/diagnostics.hpp"
#include "cohortig/evaluation.hpp"
#include "cohortig/igcs.hpp"
#include "cohortig/rng.hpp"
#include "cohortig/shapley.hpp"
#include "cohortig/similarity.hpp"
#include "cohortig/value_functions.hpp"

namespace cohortig::cli {
namespace {

using Clock = std::chrono::steady_clock;

const std::set<std::string> kMethods = {"cs-exact", "igcs", "cs-mc", "gkw", "uniqueness", "random"};

const std::set<std::string> kKnownKeys = {
    "data",  "response", "response-mode", "prediction", "similarity", "categorical",
    "numeric", "method", "methods", "targets", "target", "steps", "samples", "sigma", "seed",
    "threads", "output", "eps", "max-exact-d", "timing", "plot-data", "per-target",
    "mc-match-igcs", "corners"};

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorKind::Config, message);
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    config_error("option '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  config_error("option '" + key + "': expected a boolean, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    parts.push_back(item.substr(first, last - first + 1));
  }
  return parts;
}

// Settings merged from the config file and the command line, which wins.
class Settings {
 public:
  explicit Settings(ConfigMap values) : values_(std::move(values)) {
    for (const auto& [key, value] : values_) {
      (void)value;
      if (key.rfind("similarity.", 0) == 0) continue;
      if (!kKnownKeys.contains(key)) config_error("unknown configuration key '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return values_.contains(key); }
  std::optional<std::string> get(const std::string& key) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    return std::nullopt;
  }
  std::string require(const std::string& key) const {
    if (auto v = get(key)) return *v;
    config_error("missing required setting '" + key + "'");
  }
  template <typename T>
  T number(const std::string& key, T fallback) const {
    if (auto v = get(key)) return parse_number<T>(key, *v);
    return fallback;
  }
  bool flag(const std::string& key) const {
    if (auto v = get(key)) return parse_bool(key, *v);
    return false;
  }
  std::map<std::string, std::string> with_prefix(const std::string& prefix) const {
    std::map<std::string, std::string> out;
    for (const auto& [key, value] : values_) {
      if (key.rfind(prefix, 0) == 0) out.emplace(key.substr(prefix.size()), value);
    }
    return out;
  }

 private:
  ConfigMap values_;
};

struct Loaded {
  Dataset ds;
  SimilaritySpec spec;
  Json config;  // resolved data-side settings
};

Loaded load(const Settings& s) {
  LoadOptions options;
  options.response_column = s.require("response");
  options.response_mode =
      ResponseMode::parse(s.get("response-mode").value_or("raw"), s.get("prediction").value_or(""));
  for (const auto& name : split(s.get("categorical").value_or(""), ',')) {
    options.schema_overrides[name] = ColumnType::Categorical;
  }
  for (const auto& name : split(s.get("numeric").value_or(""), ',')) {
    if (options.schema_overrides.contains(name)) {
      config_error("column '" + name + "' declared both numeric and categorical");
    }
    options.schema_overrides[name] = ColumnType::Numeric;
  }
  Loaded out{load_dataset(s.require("data"), options), {}, Json::object()};
  out.spec = resolve_similarity(out.ds, s.get("similarity"), s.with_prefix("similarity."));

  Json& c = out.config;
  c["data"] = s.require("data");
  c["response"] = options.response_column;
  c["response_mode"] = to_string(options.response_mode);
  c["n"] = out.ds.n();
  c["d"] = out.ds.d();
  Json columns = Json::object();
  for (Index j = 0; j < out.ds.d(); ++j) {
    const auto col = static_cast<std::size_t>(j);
    columns[out.ds.column_names[col]] = {
        {"type", column_type_name(out.ds.column_types[col])},
        {"similarity", to_string(out.spec.rules[col])}};
  }
  c["columns"] = columns;
  return out;
}

std::vector<Index> parse_targets(const std::string& text, Index n) {
  std::vector<Index> targets;
  auto check = [&](Index t) {
    if (t < 0 || t >= n) {
      throw Error(ErrorKind::TargetOutOfRange,
                  "target " + std::to_string(t) + " outside [0, " + std::to_string(n) + ")");
    }
    return t;
  };
  if (text == "all") {
    for (Index t = 0; t < n; ++t) targets.push_back(t);
    return targets;
  }
  for (const auto& part : split(text, ',')) {
    const auto dash = part.find('-', 1);
    if (dash == std::string::npos) {
      targets.push_back(check(parse_number<Index>("targets", part)));
      continue;
    }
    const Index first = check(parse_number<Index>("targets", part.substr(0, dash)));
    const Index last = check(parse_number<Index>("targets", part.substr(dash + 1)));
    if (last < first) config_error("target range '" + part + "' is empty");
    for (Index t = first; t <= last; ++t) targets.push_back(t);
  }
  if (targets.empty()) config_error("no targets selected");
  return targets;
}

int thread_count(const Settings& s) {
  int threads = 0;
  if (auto v = s.get("threads")) {
    threads = parse_number<int>("threads", *v);
  } else if (const char* env = std::getenv("COHORTIG_THREADS")) {
    threads = parse_number<int>("COHORTIG_THREADS", env);
  }
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return threads;
}

// Runs fn(0..count-1) on a pool; the first exception is rethrown.
void parallel_for(Index count, int threads, const std::function<void(Index)>& fn) {
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex mutex;
  auto worker = [&] {
    for (;;) {
      const Index k = next.fetch_add(1);
      if (k >= count) return;
      try {
        fn(k);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  const int workers = static_cast<int>(std::min<Index>(std::max(threads, 1), std::max<Index>(count, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

// Output goes to --output when given, otherwise to the default stream.
class Sink {
 public:
  Sink(const Settings& s, std::ostream& fallback) : stream_(&fallback) {
    if (auto path = s.get("output")) {
      file_.open(*path, std::ios::binary);
      if (!file_) throw Error(ErrorKind::Io, "cannot write '" + *path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct MethodParams {
  std::string method;
  int steps = 50;
  std::int64_t samples = 1000;
  double sigma = 0.1;
  std::uint64_t seed = 0;
  Index max_exact = 25;
};

std::shared_ptr<const GkwModel> make_gkw(const Dataset& ds, double sigma) {
  GkwOptions options;
  options.sigma = sigma;
  return std::make_shared<const GkwModel>(ds, options);
}

Attribution attribute_one(const MethodParams& p, const Dataset& ds,
                          const std::shared_ptr<const SimilarityProfile>& profile,
                          const std::shared_ptr<const GkwModel>& gkw) {
  const Index target = profile->target();
  Attribution attr;
  if (p.method == "cs-exact") {
    attr = exact_shapley(CohortValue(profile, ds.responses), {p.max_exact});
  } else if (p.method == "igcs") {
    attr = igcs_attribution(SoftValue(profile, ds.responses), {p.steps});
  } else if (p.method == "cs-mc") {
    MonteCarloOptions options;
    options.samples = p.samples;
    options.seed = derive_seed(p.seed, static_cast<std::uint64_t>(target));
    attr = mc_shapley(CohortValue(profile, ds.responses), options);
  } else if (p.method == "gkw") {
    attr = exact_shapley(GkwValue(gkw, target, ds.responses), {p.max_exact});
  } else if (p.method == "uniqueness") {
    attr = exact_shapley(UniquenessValue(profile), {p.max_exact});
  } else if (p.method == "random") {
    // Rank surrogate: the first feature of the ordering gets d, the last 1.
    const Ordering order = random_ordering(ds.d(), derive_seed(p.seed, static_cast<std::uint64_t>(target)));
    const CohortValue nu(profile, ds.responses);
    attr.values.resize(ds.d());
    for (std::size_t k = 0; k < order.size(); ++k) {
      attr.values[order[k]] = static_cast<double>(ds.d() - static_cast<Index>(k));
    }
    attr.nu_empty = nu.empty_value();
    attr.nu_full = nu.full_value();
    attr.efficiency_gap = 0.0;
    attr.meta.seed = p.seed;
  } else {
    config_error("unknown method '" + p.method + "'");
  }
  attr.method = p.method;
  attr.target_index = target;
  return attr;
}

MethodParams method_params(const Settings& s, const std::string& method) {
  MethodParams p;
  p.method = method;
  p.steps = s.number<int>("steps", 50);
  p.samples = s.number<std::int64_t>("samples", 1000);
  p.sigma = s.number<double>("sigma", 0.1);
  p.seed = s.number<std::uint64_t>("seed", 0);
  p.max_exact = s.number<Index>("max-exact-d", 25);
  if (p.steps < 1) config_error("steps must be >= 1");
  if (p.samples < 1) config_error("samples must be >= 1");
  if (!(p.sigma > 0.0)) config_error("sigma must be > 0");
  return p;
}

Json method_json(const MethodParams& p) {
  Json j = Json::object();
  j["method"] = p.method;
  if (p.method == "igcs") j["steps"] = p.steps;
  if (p.method == "cs-mc") j["samples"] = p.samples;
  if (p.method == "gkw") j["sigma"] = p.sigma;
  if (p.method == "cs-mc" || p.method == "random") j["seed"] = p.seed;
  if (p.method == "cs-exact" || p.method == "gkw" || p.method == "uniqueness") {
    j["max_exact_d"] = p.max_exact;
  }
  return j;
}

std::shared_ptr<const SimilarityProfile> profile_for(const Loaded& data, Index target) {
  return std::make_shared<const SimilarityProfile>(
      SimilarityProfile::build(data.ds, data.spec, target));
}

// --- attribute ---------------------------------------------------------------

int cmd_attribute(const Settings& s, std::ostream& out) {
  const std::string method = s.require("method");
  if (!kMethods.contains(method)) config_error("unknown method '" + method + "'");
  // Parameters only make sense for some methods; reject the rest up front.
  const std::map<std::string, std::set<std::string>> applies = {
      {"steps", {"igcs"}},
      {"samples", {"cs-mc"}},
      {"sigma", {"gkw"}},
      {"seed", {"cs-mc", "random"}},
      {"max-exact-d", {"cs-exact", "gkw", "uniqueness"}}};
  for (const auto& [key, methods] : applies) {
    if (s.has(key) && !methods.contains(method)) {
      config_error("option '" + key + "' does not apply to method '" + method + "'");
    }
  }
  const MethodParams params = method_params(s, method);
  const Loaded data = load(s);
  const std::vector<Index> targets = parse_targets(s.get("targets").value_or("all"), data.ds.n());
  const bool timing = s.flag("timing");

  std::shared_ptr<const GkwModel> gkw;
  if (method == "gkw") gkw = make_gkw(data.ds, params.sigma);
  if ((method == "cs-exact" || method == "gkw" || method == "uniqueness") &&
      data.ds.d() > params.max_exact) {
    throw Error(ErrorKind::DimensionTooLarge,
                "method '" + method + "' needs d <= " + std::to_string(params.max_exact) +
                    ", got d = " + std::to_string(data.ds.d()));
  }

  std::vector<AttributionRecord> records(targets.size());
  parallel_for(static_cast<Index>(targets.size()), thread_count(s), [&](Index k) {
    const auto start = Clock::now();
    auto& rec = records[static_cast<std::size_t>(k)];
    rec.attribution = attribute_one(params, data.ds, profile_for(data, targets[k]), gkw);
    if (timing) rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  });

  Json config = data.config;
  config["command"] = "attribute";
  config["targets"] = s.get("targets").value_or("all");
  config["method"] = method_json(params);
  Sink sink(s, out);
  write_attribution_header(*sink, config);
  for (const auto& rec : records) {
    write_attribution_record(*sink, rec.attribution, data.ds.column_names, rec.seconds);
  }
  return kExitOk;
}

// --- evaluate ----------------------------------------------------------------

struct Scored {
  std::string method;
  AbcReport report;
};

void write_abc_table(std::ostream& os, const std::vector<Scored>& rows) {
  os << "row,method,target_index,abc_insertion,abc_deletion,abc_sum\n";
  std::vector<std::string> methods;
  std::map<std::string, std::array<std::vector<double>, 3>> by_method;
  for (const auto& r : rows) {
    const double sum = r.report.abc_insertion + r.report.abc_deletion;
    os << "target," << r.method << ',' << r.report.target_index << ','
       << fmt(r.report.abc_insertion) << ',' << fmt(r.report.abc_deletion) << ',' << fmt(sum)
       << '\n';
    if (!by_method.contains(r.method)) methods.push_back(r.method);
    auto& acc = by_method[r.method];
    acc[0].push_back(r.report.abc_insertion);
    acc[1].push_back(r.report.abc_deletion);
    acc[2].push_back(sum);
  }
  for (const auto& m : methods) {
    const auto& acc = by_method[m];
    const MeanAndError ins = mean_and_error(acc[0]);
    const MeanAndError del = mean_and_error(acc[1]);
    const MeanAndError sum = mean_and_error(acc[2]);
    os << "mean," << m << ",," << fmt(ins.mean) << ',' << fmt(del.mean) << ',' << fmt(sum.mean) << '\n';
    os << "stderr," << m << ",," << fmt(ins.standard_error) << ',' << fmt(del.standard_error)
       << ',' << fmt(sum.standard_error) << '\n';
  }
}

void write_curves(const std::string& path, const std::vector<Scored>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  os << "method,target_index,curve,k,value\n";
  for (const auto& r : rows) {
    for (Index k = 0; k < r.report.insertion_curve.size(); ++k) {
      os << r.method << ',' << r.report.target_index << ",insertion," << k << ','
         << fmt(r.report.insertion_curve[k]) << '\n';
    }
    for (Index k = 0; k < r.report.deletion_curve.size(); ++k) {
      os << r.method << ',' << r.report.target_index << ",deletion," << k << ','
         << fmt(r.report.deletion_curve[k]) << '\n';
    }
  }
}

int cmd_evaluate(const Settings& s, const std::vector<std::string>& files, std::ostream& out) {
  if (files.empty()) config_error("evaluate needs at least one attribution file");
  const Loaded data = load(s);
  std::vector<AttributionFile> inputs;
  std::vector<const Attribution*> attrs;
  std::vector<Scored> rows;
  Json sources = Json::array();
  for (const auto& path : files) {
    AttributionFile& file = inputs.emplace_back(read_attributions(path));
    if (!file.records.empty() && file.feature_names != data.ds.column_names) {
      throw Error(ErrorKind::DimensionMismatch,
                  "attribution file '" + path + "' does not match the dataset's feature columns");
    }
    for (const auto& rec : file.records) {
      if (rec.attribution.target_index < 0 || rec.attribution.target_index >= data.ds.n()) {
        throw Error(ErrorKind::DimensionMismatch, "attribution file '" + path +
                                                      "' names a target outside the dataset");
      }
    }
    sources.push_back(path);
  }
  for (const auto& file : inputs) {
    for (const auto& rec : file.records) {
      attrs.push_back(&rec.attribution);
      rows.push_back({rec.attribution.method, {}});
    }
  }
  parallel_for(static_cast<Index>(rows.size()), thread_count(s), [&](Index k) {
    const Attribution& a = *attrs[static_cast<std::size_t>(k)];
    const CohortValue nu(profile_for(data, a.target_index), data.ds.responses);
    rows[static_cast<std::size_t>(k)].report = evaluate_ordering(nu, variable_ordering(a), a.target_index);
  });

  Json config = data.config;
  config["command"] = "evaluate";
  config["attribution_files"] = sources;
  Sink sink(s, out);
  *sink << "# config: " << config.dump() << '\n';
  write_abc_table(*sink, rows);
  if (auto plot = s.get("plot-data")) write_curves(*plot, rows);
  return kExitOk;
}

// --- compare -----------------------------------------------------------------

struct CompareEntry {
  MethodParams params;
  std::string label;
  bool calibrate = false;
};

int cmd_compare(const Settings& s, std::ostream& out, std::ostream& err) {
  const auto specs = split(s.require("methods"), ',');
  if (specs.empty()) config_error("compare needs at least one method");
  std::vector<CompareEntry> entries;
  for (const auto& spec : specs) {
    const auto colon = spec.find(':');
    CompareEntry e;
    e.params = method_params(s, spec.substr(0, colon));
    if (!kMethods.contains(e.params.method)) config_error("unknown method '" + e.params.method + "'");
    e.label = spec;
    if (colon != std::string::npos) {
      const std::string arg = spec.substr(colon + 1);
      if (e.params.method == "igcs") {
        e.params.steps = parse_number<int>("methods", arg);
      } else if (e.params.method == "cs-mc") {
        e.params.samples = parse_number<std::int64_t>("methods", arg);
      } else if (e.params.method == "gkw") {
        e.params.sigma = parse_number<double>("methods", arg);
      } else {
        config_error("method '" + e.params.method + "' takes no parameter");
      }
    } else if (e.params.method == "cs-mc" && s.flag("mc-match-igcs")) {
      e.calibrate = true;
    }
    entries.push_back(e);
  }

  const Loaded data = load(s);
  const std::vector<Index> targets = parse_targets(s.get("targets").value_or("all"), data.ds.n());
  const int threads = thread_count(s);
  std::vector<std::shared_ptr<const SimilarityProfile>> profiles(targets.size());
  parallel_for(static_cast<Index>(targets.size()), threads,
               [&](Index k) { profiles[static_cast<std::size_t>(k)] = profile_for(data, targets[k]); });

  struct Cell {
    AbcReport report;
    double seconds = 0.0;
    double gap = 0.0;
  };
  std::vector<std::vector<Cell>> cells(entries.size(), std::vector<Cell>(targets.size()));
  std::shared_ptr<const GkwModel> gkw;
  std::optional<double> igcs_seconds;

  auto run_entry = [&](std::size_t e) {
    const auto& params = entries[e].params;
    if (params.method == "gkw") gkw = make_gkw(data.ds, params.sigma);
    // Timings are per target, so targets run one at a time here.
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const auto start = Clock::now();
      const Attribution a = attribute_one(params, data.ds, profiles[k], gkw);
      cells[e][k].seconds = std::chrono::duration<double>(Clock::now() - start).count();
      cells[e][k].gap = a.efficiency_gap;
      const CohortValue nu(profiles[k], data.ds.responses);
      cells[e][k].report = evaluate_ordering(nu, variable_ordering(a), targets[k]);
    }
    if (params.method == "igcs" && !igcs_seconds) {
      double total = 0.0;
      for (const auto& c : cells[e]) total += c.seconds;
      igcs_seconds = total / static_cast<double>(targets.size());
    }
  };

  for (std::size_t e = 0; e < entries.size(); ++e) {
    if (!entries[e].calibrate) run_entry(e);
  }
  for (std::size_t e = 0; e < entries.size(); ++e) {
    if (!entries[e].calibrate) continue;
    if (!igcs_seconds) config_error("--mc-match-igcs needs an igcs entry in --methods");
    // Pilot run to price one permutation, then match the IGCS budget.
    MethodParams pilot = entries[e].params;
    pilot.samples = 32;
    const auto start = Clock::now();
    attribute_one(pilot, data.ds, profiles.front(), gkw);
    const double per_sample =
        std::chrono::duration<double>(Clock::now() - start).count() / static_cast<double>(pilot.samples);
    entries[e].params.samples =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(*igcs_seconds / per_sample));
    entries[e].label = "cs-mc:" + std::to_string(entries[e].params.samples);
    err << "calibrated cs-mc to " << entries[e].params.samples << " permutations per target\n";
    run_entry(e);
  }

  Sink sink(s, out);
  Json config = data.config;
  config["command"] = "compare";
  config["targets"] = s.get("targets").value_or("all");
  Json methods = Json::array();
  for (const auto& e : entries) methods.push_back(method_json(e.params));
  config["methods"] = methods;
  *sink << "# config: " << config.dump() << '\n';
  *sink << "method,targets,abc_insertion_mean,abc_insertion_se,abc_deletion_mean,"
           "abc_deletion_se,abc_sum_mean,abc_sum_se,seconds_per_target,mean_efficiency_gap\n";
  for (std::size_t e = 0; e < entries.size(); ++e) {
    std::vector<double> ins, del, sum, secs, gaps;
    for (const auto& c : cells[e]) {
      ins.push_back(c.report.abc_insertion);
      del.push_back(c.report.abc_deletion);
      sum.push_back(c.report.abc_insertion + c.report.abc_deletion);
      secs.push_back(c.seconds);
      gaps.push_back(c.gap);
    }
    const auto i = mean_and_error(ins);
    const auto d = mean_and_error(del);
    const auto t = mean_and_error(sum);
    *sink << entries[e].label << ',' << targets.size() << ',' << fmt(i.mean) << ','
          << fmt(i.standard_error) << ',' << fmt(d.mean) << ',' << fmt(d.standard_error) << ','
          << fmt(t.mean) << ',' << fmt(t.standard_error) << ',' << fmt(mean_and_error(secs).mean)
          << ',' << fmt(mean_and_error(gaps).mean) << '\n';
  }
  if (auto path = s.get("per-target")) {
    std::ofstream os(*path, std::ios::binary);
    if (!os) throw Error(ErrorKind::Io, "cannot write '" + *path + "'");
    os << "method,target_index,abc_insertion,abc_deletion,seconds,efficiency_gap\n";
    for (std::size_t e = 0; e < entries.size(); ++e) {
      for (const auto& c : cells[e]) {
        os << entries[e].label << ',' << c.report.target_index << ',' << fmt(c.report.abc_insertion)
           << ',' << fmt(c.report.abc_deletion) << ',' << fmt(c.seconds) << ',' << fmt(c.gap) << '\n';
      }
    }
  }
  return kExitOk;
}

// --- diagnose ----------------------------------------------------------------

int cmd_diagnose(const Settings& s, std::ostream& out) {
  const Loaded data = load(s);
  const std::vector<Index> targets = parse_targets(s.get("targets").value_or("all"), data.ds.n());
  const double eps = s.number<double>("eps", 0.01);
  const auto samples = s.number<std::int64_t>("samples", 10000);
  const auto seed = s.number<std::uint64_t>("seed", 0);
  const bool corners = data.ds.d() <= 20 && (!s.has("corners") || s.flag("corners"));

  std::vector<ConvergenceReport> reports(targets.size());
  parallel_for(static_cast<Index>(targets.size()), thread_count(s), [&](Index k) {
    const auto profile = profile_for(data, targets[k]);
    auto& r = reports[static_cast<std::size_t>(k)];
    r = heps_mass(*profile, eps, samples, derive_seed(seed, static_cast<std::uint64_t>(targets[k])));
    if (corners) {
      const CornerReport c = corner_convergence(*profile);
      r.corner_fraction = c.fraction;
      r.corner_bound = c.bound;
    }
  });

  Json config = data.config;
  config["command"] = "diagnose";
  config["targets"] = s.get("targets").value_or("all");
  config["eps"] = eps;
  config["samples"] = samples;
  config["seed"] = seed;
  config["bound"] =
      "rows^2/eps*exp(-floor(a*d)/4), rows = non-target rows not identical to the target; "
      "with n1 copies of the target (itself included) eps is scaled by n1";
  Sink sink(s, out);
  *sink << "# config: " << config.dump() << '\n';
  *sink << "target_index,d,other_rows,duplicates,duplicate_regime,a,a_max,eps,samples,mc_mass,"
           "mc_standard_error,theorem_bound,corner_fraction,corner_bound\n";
  for (const auto& r : reports) {
    *sink << r.target_index << ',' << r.d << ',' << r.other_rows << ',' << r.duplicates << ','
          << (r.duplicate_regime ? "true" : "false") << ',' << fmt(r.a) << ',' << fmt(r.a_max)
          << ',' << fmt(r.eps) << ',' << r.samples << ',' << fmt(r.mc_mass) << ','
          << fmt(r.mc_standard_error) << ',' << fmt(r.theorem_bound) << ','
          << (r.corner_fraction ? fmt(*r.corner_fraction) : "") << ','
          << (r.corner_bound ? fmt(*r.corner_bound) : "") << '\n';
  }
  return kExitOk;
}

// --- similarity / summary ----------------------------------------------------

int cmd_similarity(const Settings& s, std::ostream& out) {
  const Loaded data = load(s);
  const std::vector<Index> targets = parse_targets(s.require("target"), data.ds.n());
  if (targets.size() != 1) config_error("similarity takes exactly one target");
  const auto profile = profile_for(data, targets.front());
  const IndicatorMatrix ind = profile->indicators();
  Sink sink(s, out);
  *sink << "row";
  for (const auto& name : data.ds.column_names) *sink << ',' << name;
  *sink << '\n';
  for (Index i = 0; i < ind.rows(); ++i) {
    *sink << i;
    for (Index j = 0; j < ind.cols(); ++j) *sink << ',' << static_cast<int>(ind(i, j));
    *sink << '\n';
  }
  return kExitOk;
}

int cmd_summary(const Settings& s, std::ostream& out) {
  const Loaded data = load(s);
  Sink sink(s, out);
  *sink << summarize(data.ds);
  return kExitOk;
}

void report_error(std::ostream& err, std::string_view kind, std::string_view category,
                  const std::string& message) {
  Json record = Json::object();
  record["error"] = {{"kind", kind}, {"category", category}, {"message", message}};
  err << record.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model-free variable importance: cohort Shapley and its integrated-gradient approximation"};
  app.name("cohortig");
  app.require_subcommand(1);

  std::map<std::string, std::string> storage;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::string config_path;
  std::vector<std::string> similarity_columns;
  std::vector<std::string> files;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Key-value configuration file");
    auto add = [&options, &storage, sub](const std::string& key, const std::string& help) {
      options.emplace_back(key, sub->add_option("--" + key, storage[key], help));
    };
    add("data", "Input CSV with a header row");
    add("response", "Response column");
    add("response-mode", "raw | residual | abs-residual | squared-residual");
    add("prediction", "Prediction column for the residual modes");
    add("similarity", "Default rule for numeric columns: relative:<delta> | absolute:<w> | equality");
    sub->add_option("--similarity-column", similarity_columns, "Per-column rule, <column>=<rule>");
    add("categorical", "Comma-separated columns forced categorical");
    add("numeric", "Comma-separated columns forced numeric");
    add("threads", "Worker threads (default: $COHORTIG_THREADS or all cores)");
    add("output", "Output file (default: standard output)");
    return add;
  };

  CLI::App* attribute = app.add_subcommand("attribute", "Per-target attributions");
  {
    auto add = common(attribute);
    add("method", "cs-exact | igcs | cs-mc | gkw | uniqueness | random");
    add("targets", "all | i | a-b | comma-separated list of those");
    add("steps", "IGCS quadrature steps (default 50)");
    add("samples", "Monte Carlo permutations (default 1000)");
    add("sigma", "GKW kernel bandwidth (default 0.1)");
    add("seed", "Seed for cs-mc and random (default 0)");
    add("max-exact-d", "Largest d for exact enumeration (default 25)");
    add("timing", "Record per-target seconds in the output (true/false)");
  }
  CLI::App* evaluate = app.add_subcommand("evaluate", "Insertion/deletion ABC of attribution files");
  {
    auto add = common(evaluate);
    add("plot-data", "Also write the curve points to this CSV");
    evaluate->add_option("files", files, "Attribution files")->required();
  }
  CLI::App* compare = app.add_subcommand("compare", "ABC and timing across methods");
  {
    auto add = common(compare);
    add("methods", "Comma-separated methods, optionally method:param (igcs:200, cs-mc:5000)");
    add("targets", "all | i | a-b | comma-separated list of those");
    add("steps", "IGCS quadrature steps (default 50)");
    add("samples", "Monte Carlo permutations (default 1000)");
    add("sigma", "GKW kernel bandwidth (default 0.1)");
    add("seed", "Seed for cs-mc and random (default 0)");
    add("max-exact-d", "Largest d for exact enumeration (default 25)");
    add("per-target", "Also write per-target rows to this CSV");
    add("mc-match-igcs", "Size cs-mc entries without a count to IGCS wall-clock (true/false)");
  }
  CLI::App* diagnose = app.add_subcommand("diagnose", "Taylor-convergence diagnostics per target");
  {
    auto add = common(diagnose);
    add("targets", "all | i | a-b | comma-separated list of those");
    add("eps", "Soft-mass threshold in (0, 1) (default 0.01)");
    add("samples", "Monte Carlo points (default 10000)");
    add("seed", "Seed (default 0)");
    add("corners", "Enumerate corners when d <= 20 (default true)");
  }
  CLI::App* similarity = app.add_subcommand("similarity", "Dump the 0/1 similarity matrix for one target");
  {
    auto add = common(similarity);
    add("target", "Target row index");
  }
  CLI::App* summary = app.add_subcommand("summary", "Dataset summary");
  common(summary);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    report_error(err, "Config", "config", e.what());
    return kExitConfig;
  }

  try {
    ConfigMap merged = config_path.empty() ? ConfigMap{} : load_config(config_path);
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) merged[key] = storage[key];
    }
    for (const auto& entry : similarity_columns) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos || eq == 0) {
        config_error("--similarity-column expects <column>=<rule>, got '" + entry + "'");
      }
      merged["similarity." + entry.substr(0, eq)] = entry.substr(eq + 1);
    }
    const Settings settings(std::move(merged));

    if (attribute->parsed()) return cmd_attribute(settings, out);
    if (evaluate->parsed()) return cmd_evaluate(settings, files, out);
    if (compare->parsed()) return cmd_compare(settings, out, err);
    if (diagnose->parsed()) return cmd_diagnose(settings, out);
    if (similarity->parsed()) return cmd_similarity(settings, out);
    if (summary->parsed()) return cmd_summary(settings, out);
    return kExitConfig;
  } catch (const Error& e) {
    const char* category = "computation";
    int code = kExitComputation;
    if (e.category() == ErrorCategory::Config) {
      category = "config";
      code = kExitConfig;
    } else if (e.category() == ErrorCategory::Data) {
      category = "data";
      code = kExitData;
    }
    report_error(err, error_kind_name(e.kind()), category, e.what());
    return code;
  } catch (const std::exception& e) {
    report_error(err, "Internal", "computation", e.what());
    return kExitComputation;
  }
}

}  // namespace cohortig::cli
