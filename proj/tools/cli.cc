// Copyright 2026 The Surprisal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "surprisal/coverage.h"
#include "surprisal/detect.h"
#include "surprisal/dsa.h"
#include "surprisal/error.h"
#include "surprisal/guide.h"
#include "surprisal/lsa.h"
#include "surprisal/manifest.h"
#include "surprisal/report.h"
#include "surprisal/toynet.h"
#include "surprisal/trace.h"

namespace surprisal::cli {
namespace {

// Bad flag combinations found after CLI11 accepted the command line.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

// "key=value" lines recorded at the top of every output file.
class Provenance {
 public:
  explicit Provenance(const std::string& subcommand) {
    lines_.push_back("surprisal " + subcommand);
  }
  void add(const std::string& key, const std::string& value) { lines_.push_back(key + "=" + value); }
  void add(const std::string& key, double value) { add(key, format_double(value)); }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, const std::vector<std::string>& values) {
    std::string joined;
    for (const std::string& v : values) joined += (joined.empty() ? "" : ";") + v;
    add(key, joined);
  }
  const std::vector<std::string>& lines() const noexcept { return lines_; }

 private:
  std::vector<std::string> lines_;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw Error(ErrorCode::kIo, "error writing '" + path + "'");
}

std::vector<std::size_t> parse_column_list(const std::string& text) {
  std::vector<std::size_t> columns;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item(text.data() + start, comma - start);
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || end != item.data() + item.size()) {
      throw UsageError("--columns expects comma-separated column indices, got '" + text + "'");
    }
    columns.push_back(value);
    start = comma + 1;
  }
  return columns;
}

std::vector<std::size_t> parse_size_list(const std::string& flag, const std::string& text) {
  try {
    return parse_column_list(text);
  } catch (const UsageError&) {
    throw UsageError(flag + " expects comma-separated sizes, got '" + text + "'");
  }
}

struct SelectorFlags {
  std::string layer;
  std::string columns;

  void attach(CLI::App* app) {
    auto* l = app->add_option("--layer", layer, "Restrict to the neurons of one layer");
    auto* c = app->add_option("--columns", columns, "Restrict to comma-separated columns");
    l->excludes(c);
  }
  NeuronSelector resolve() const {
    if (!layer.empty()) return NeuronSelector::layer(layer);
    if (!columns.empty()) return NeuronSelector::columns(parse_column_list(columns));
    return NeuronSelector::all();
  }
};

const std::map<std::string, LabelSource> kLabelSources = {
    {"predicted", LabelSource::kPredicted}, {"ground_truth", LabelSource::kGroundTruth}};

// ---------------------------------------------------------------------------
// lsa

struct LsaFlags {
  std::string train;
  std::string test;
  SelectorFlags selector;
  double t = kDefaultVarianceThreshold;
  std::string per_class = "predicted";
  std::string query_labels;
  std::string output = "-";
};

int run_lsa(const LsaFlags& f, std::ostream& out) {
  const bool per_class = f.per_class != "none";
  if (!per_class && !f.query_labels.empty()) {
    throw UsageError("--query-labels needs --per-class predicted or ground_truth");
  }
  const NeuronSelector sel = f.selector.resolve();
  const TraceSet train = load_traceset(f.train);
  const TraceSet test = load_traceset(f.test);

  const TrainingProfile profile = build_profile(train, sel, f.t);
  const LabelSource train_source =
      per_class ? kLabelSources.at(f.per_class) : LabelSource::kPredicted;
  const std::vector<DensityModel> models = fit_kde(train, profile, per_class, train_source);

  QueryClass query_class = QueryClass::kUnconditioned;
  std::string query_name = "unconditioned";
  if (per_class) {
    query_name = f.query_labels.empty() ? f.per_class : f.query_labels;
    query_class = kLabelSources.at(query_name) == LabelSource::kPredicted
                      ? QueryClass::kPredicted
                      : QueryClass::kGroundTruth;
  }
  const SurpriseReport report = lsa_batch(models, test, profile, query_class);

  Provenance prov("lsa");
  prov.add("train", f.train);
  prov.add("test", f.test);
  prov.add("t", f.t);
  prov.add("per_class", f.per_class);
  prov.add("query_labels", query_name);
  prov.add("neurons_profiled", static_cast<std::uint64_t>(profile.neuron_count()));
  prov.add("neurons_retained", static_cast<std::uint64_t>(profile.retained_count()));
  for (const DensityModel& m : models) {
    const std::string name =
        m.label() ? "model_class_" + std::to_string(m.label()->value) : std::string("model_all");
    prov.add(name, "n=" + std::to_string(m.sample_count()) + " ridge=" + format_double(m.ridge()));
  }
  std::ostringstream text;
  write_report_csv(text, report, prov.lines());
  emit(f.output, text.str(), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// dsa

struct DsaFlags {
  std::string train;
  std::string test;
  SelectorFlags selector;
  std::string train_labels = "predicted";
  std::string query_labels = "predicted";
  bool exclude_self = false;
  std::string output = "-";
};

int run_dsa(const DsaFlags& f, std::ostream& out) {
  const NeuronSelector sel = f.selector.resolve();
  const TraceSet train = load_traceset(f.train);
  const TraceSet test = load_traceset(f.test);
  if (f.exclude_self && test.num_inputs() != train.num_inputs()) {
    throw Error(ErrorCode::kRowCountMismatch,
                "--exclude-self needs the test set to be the training set, got " +
                    std::to_string(test.num_inputs()) + " vs " +
                    std::to_string(train.num_inputs()) + " rows");
  }
  const ClassIndex index = build_class_index(train, sel, kLabelSources.at(f.train_labels));
  DsaBatchOptions options;
  options.label_source = kLabelSources.at(f.query_labels);
  options.exclude_self = f.exclude_self;
  const SurpriseReport report = dsa_batch(index, test, options);

  Provenance prov("dsa");
  prov.add("train", f.train);
  prov.add("test", f.test);
  prov.add("train_labels", f.train_labels);
  prov.add("query_labels", f.query_labels);
  prov.add("exclude_self", f.exclude_self ? "true" : "false");
  prov.add("neurons", static_cast<std::uint64_t>(index.dimension()));
  std::ostringstream text;
  write_report_csv(text, report, prov.lines());
  emit(f.output, text.str(), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// coverage

struct CoverageFlags {
  std::string criterion;
  std::string sa_file;
  std::string test;
  std::vector<std::string> add;
  std::string train;
  SelectorFlags selector;
  std::optional<std::size_t> n;
  std::optional<double> ub;
  std::size_t k = kDefaultKmncSections;
  double th = kDefaultNcThreshold;
  std::string scaling = "minmax";
  std::string suggest_ub;
  double percentile = 0.99;
  std::string output = "-";
};

int run_suggest_ub(const CoverageFlags& f, std::ostream& out) {
  if (!f.criterion.empty() || f.n || f.ub || !f.add.empty() || !f.sa_file.empty()) {
    throw UsageError("--suggest-ub runs on its own; drop the coverage flags");
  }
  if (!(f.percentile >= 0.0 && f.percentile <= 1.0)) {
    throw UsageError("--percentile must lie in [0, 1]");
  }
  const SurpriseReport report = read_report_csv_file(f.suggest_ub);
  const std::vector<double> values = report.ok_values();
  Provenance prov("coverage");
  prov.add("suggest_ub", f.suggest_ub);
  prov.add("percentile", f.percentile);
  nlohmann::json j;
  j["provenance"] = prov.lines();
  j["percentile"] = f.percentile;
  j["suggested_ub"] = suggest_upper_bound(values, f.percentile);
  j["values"] = values.size();
  emit(f.output, j.dump(2) + "\n", out);
  return kExitOk;
}

int run_coverage(const CoverageFlags& f, std::ostream& out) {
  if (!f.suggest_ub.empty()) return run_suggest_ub(f, out);
  if (f.criterion.empty()) throw UsageError("--criterion is required");
  const Criterion criterion = *parse_criterion(f.criterion);
  const bool surprise = is_surprise_criterion(criterion);

  std::vector<std::string> inputs;
  if (surprise) {
    if (!f.test.empty() || !f.train.empty()) {
      throw UsageError(f.criterion + " reads SA reports; use --sa-file / --add, not --test/--train");
    }
    if (!f.n || !f.ub) throw UsageError(f.criterion + " needs both --n and --ub");
    if (*f.n == 0) throw UsageError("--n must be at least 1");
    if (!(*f.ub > 0.0) || !std::isfinite(*f.ub)) throw UsageError("--ub must be positive");
    if (!f.sa_file.empty()) inputs.push_back(f.sa_file);
  } else {
    if (!f.sa_file.empty()) {
      throw UsageError(f.criterion + " reads trace manifests; use --test / --add, not --sa-file");
    }
    if (criterion != Criterion::kNc && f.train.empty()) {
      throw UsageError(f.criterion + " needs --train for the neuron ranges");
    }
    if (criterion == Criterion::kKmnc && f.k == 0) throw UsageError("--k must be at least 1");
    if (!f.test.empty()) inputs.push_back(f.test);
  }
  inputs.insert(inputs.end(), f.add.begin(), f.add.end());
  if (inputs.empty()) throw UsageError("no inputs; give --sa-file/--test or --add");

  CriterionConfig cfg;
  cfg.criterion = criterion;
  cfg.nc_threshold = f.th;
  cfg.nc_scaling = f.scaling == "raw" ? NcScaling::kRaw : NcScaling::kPerInputLayerMinMax;
  cfg.k = f.k;
  Provenance prov("coverage");
  prov.add("criterion", f.criterion);

  std::vector<CoverageStep> steps;
  if (surprise) {
    cfg.buckets = BucketConfig{*f.ub, *f.n};
    prov.add("n", static_cast<std::uint64_t>(*f.n));
    prov.add("ub", *f.ub);
    for (const std::string& path : inputs) {
      steps.emplace_back(read_report_csv_file(path).ok_values());
    }
  } else {
    const NeuronSelector sel = f.selector.resolve();
    prov.add("selector", sel.describe());
    if (criterion == Criterion::kNc) {
      prov.add("th", f.th);
      prov.add("scaling", f.scaling);
    } else {
      prov.add("train", f.train);
      cfg.ranges = ranges_from_traces(select_columns(load_traceset(f.train), sel));
      if (criterion == Criterion::kKmnc) prov.add("k", static_cast<std::uint64_t>(f.k));
    }
    for (const std::string& path : inputs) {
      steps.emplace_back(select_columns(load_traceset(path), sel));
    }
  }
  prov.add("steps", inputs);

  std::ostringstream text;
  write_cumulative_csv(text, cumulative_coverage(steps, cfg), prov.lines());
  emit(f.output, text.str(), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// detect

struct DetectFlags {
  std::vector<std::string> original;
  std::vector<std::string> adversarial;
  std::size_t train_per_class = kDefaultTrainPerClass;
  std::uint64_t seed = 0;
  LogisticOptions logistic;
  std::string output = "-";
};

struct FeatureTable {
  Matrix features;
  std::size_t dropped = 0;
};

// One column per report; rows are the inputs clean in every report.
FeatureTable feature_table(const std::vector<std::string>& paths) {
  std::vector<SurpriseReport> reports;
  for (const std::string& p : paths) reports.push_back(read_report_csv_file(p));
  const std::size_t n = reports.front().entries.size();
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].entries.size() != n) {
      throw Error(ErrorCode::kRowCountMismatch,
                  paths[i] + " has " + std::to_string(reports[i].entries.size()) +
                      " rows, " + paths[0] + " has " + std::to_string(n));
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (reports[i].entries[r].id != reports[0].entries[r].id) {
        throw Error(ErrorCode::kRowCountMismatch,
                    paths[i] + " row " + std::to_string(r) + " has id '" +
                        reports[i].entries[r].id + "', expected '" +
                        reports[0].entries[r].id + "'");
      }
    }
  }
  std::vector<double> values;
  FeatureTable table;
  for (std::size_t r = 0; r < n; ++r) {
    bool clean = true;
    for (const SurpriseReport& rep : reports) clean = clean && rep.entries[r].ok();
    if (!clean) {
      ++table.dropped;
      continue;
    }
    for (const SurpriseReport& rep : reports) values.push_back(rep.entries[r].value);
  }
  const std::size_t kept = n - table.dropped;
  table.features = Matrix(kept, reports.size(), std::move(values));
  return table;
}

int run_detect(const DetectFlags& f, std::ostream& out) {
  if (f.original.size() != f.adversarial.size()) {
    throw UsageError("give one --sa-file-adv per --sa-file (" + std::to_string(f.original.size()) +
                     " vs " + std::to_string(f.adversarial.size()) + ")");
  }
  if (f.train_per_class == 0) throw UsageError("--train-per-class must be at least 1");
  const FeatureTable original = feature_table(f.original);
  const FeatureTable adversarial = feature_table(f.adversarial);
  const Rq1Result result = rq1_protocol(original.features, adversarial.features,
                                        f.train_per_class, f.seed, f.logistic);

  Provenance prov("detect");
  prov.add("sa_file", f.original);
  prov.add("sa_file_adv", f.adversarial);
  prov.add("train_per_class", static_cast<std::uint64_t>(f.train_per_class));
  prov.add("seed", f.seed);
  prov.add("l2", f.logistic.l2);
  prov.add("max_iters", static_cast<std::uint64_t>(f.logistic.max_iters));
  prov.add("tol", f.logistic.tol);

  nlohmann::json j;
  j["provenance"] = prov.lines();
  j["auc"] = result.test_auc;
  j["n_train"] = result.n_train;
  j["n_test"] = result.n_test;
  j["seed"] = result.seed;
  j["feature_mode"] = f.original.size() == 1 ? "scalar" : "per_layer";
  j["dropped_flagged"] = {{"original", original.dropped}, {"adversarial", adversarial.dropped}};
  j["weights"] = result.model.weights;
  j["bias"] = result.model.bias;
  emit(f.output, j.dump(2) + "\n", out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sample

struct SampleFlags {
  std::string sa_file;
  std::optional<double> ub;
  std::optional<double> low;
  std::optional<double> high;
  std::size_t count = kDefaultSampleCount;
  std::uint64_t seed = 0;
  std::string output = "-";
};

int run_sample(const SampleFlags& f, std::ostream& out) {
  if (f.count == 0) throw UsageError("--count must be at least 1");
  if (f.ub.has_value() == f.high.has_value()) {
    throw UsageError("give exactly one of --ub (four nested ranges) or --high (one range)");
  }
  if (f.low && !f.high) throw UsageError("--low only applies together with --high");
  if (f.ub && !(*f.ub > 0.0)) throw UsageError("--ub must be positive");

  const SurpriseReport report = read_report_csv_file(f.sa_file);
  Provenance prov("sample");
  prov.add("sa_file", f.sa_file);
  prov.add("count", static_cast<std::uint64_t>(f.count));
  prov.add("seed", f.seed);

  std::vector<RangeSample> plan;
  if (f.ub) {
    prov.add("ub", *f.ub);
    plan = four_range_plan(report, *f.ub, f.count, f.seed);
  } else {
    SaRange range{f.low.value_or(0.0), *f.high, "custom"};
    prov.add("low", range.low);
    prov.add("high", range.high);
    plan.push_back(sample_by_range(report, range, f.count, f.seed));
  }
  emit(f.output, range_plan_to_json(plan, prov.lines()), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// curve

struct CurveFlags {
  std::string sa_file;
  std::string test;
  std::string direction = "all";
  std::size_t steps = 10;
  std::uint64_t seed = 0;
  std::string output = "-";
};

int run_curve(const CurveFlags& f, std::ostream& out) {
  if (f.steps == 0) throw UsageError("--steps must be at least 1");
  const SurpriseReport report = read_report_csv_file(f.sa_file);
  const TraceSet test = load_traceset(f.test);
  const auto& predicted = test.labels(LabelSource::kPredicted);
  const auto& truth = test.labels(LabelSource::kGroundTruth);
  if (predicted.size() != report.entries.size()) {
    throw Error(ErrorCode::kRowCountMismatch,
                f.test + " has " + std::to_string(predicted.size()) + " inputs, " + f.sa_file +
                    " has " + std::to_string(report.entries.size()) + " rows");
  }
  std::vector<std::uint8_t> correct(predicted.size());
  for (std::size_t i = 0; i < correct.size(); ++i) correct[i] = predicted[i] == truth[i];

  std::vector<CurveDirection> directions;
  if (f.direction == "all" || f.direction == "ascending") {
    directions.push_back(CurveDirection::kAscending);
  }
  if (f.direction == "all" || f.direction == "descending") {
    directions.push_back(CurveDirection::kDescending);
  }
  if (f.direction == "all" || f.direction == "random") {
    directions.push_back(CurveDirection::kRandom);
  }

  Provenance prov("curve");
  prov.add("sa_file", f.sa_file);
  prov.add("test", f.test);
  prov.add("steps", static_cast<std::uint64_t>(f.steps));
  prov.add("seed", f.seed);
  std::ostringstream text;
  for (const std::string& line : prov.lines()) text << "# " << line << '\n';
  bool header = true;
  for (CurveDirection d : directions) {
    write_curve_csv(text, d, sa_order_curve(report, correct, d, f.steps, f.seed), header);
    header = false;
  }
  emit(f.output, text.str(), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fixture

struct FixtureFlags {
  FixtureOptions options;
  std::string hidden = "32,16";
  std::string out_dir;
  std::string output = "-";
};

double accuracy(const TraceSet& t) {
  const auto& p = t.labels(LabelSource::kPredicted);
  const auto& g = t.labels(LabelSource::kGroundTruth);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < p.size(); ++i) hits += p[i] == g[i] ? 1 : 0;
  return p.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(p.size());
}

int run_fixture(FixtureFlags f, std::ostream& out) {
  f.options.hidden_sizes = parse_size_list("--hidden", f.hidden);
  const Fixture fixture = make_fixture(f.options);
  std::filesystem::create_directories(f.out_dir);
  const FixtureFiles files = write_fixture(fixture, f.out_dir);

  Provenance prov("fixture");
  prov.add("seed", f.options.seed);
  prov.add("n_train", static_cast<std::uint64_t>(f.options.n_train));
  prov.add("n_test", static_cast<std::uint64_t>(f.options.n_test));
  prov.add("classes", static_cast<std::uint64_t>(f.options.n_classes));
  prov.add("d_in", static_cast<std::uint64_t>(f.options.d_in));
  prov.add("hidden", f.hidden);
  prov.add("separation", f.options.center_separation);
  prov.add("perturbation", f.options.perturbation);

  nlohmann::json j;
  j["provenance"] = prov.lines();
  j["train_manifest"] = files.train_manifest.generic_string();
  j["test_manifest"] = files.test_manifest.generic_string();
  j["perturbed_manifest"] = files.perturbed_manifest.generic_string();
  j["layers"] = nlohmann::json::array();
  for (const LayerSpec& l : fixture.train.layers()) {
    j["layers"].push_back({{"name", l.name}, {"neuron_count", l.neuron_count}});
  }
  j["accuracy"] = {{"train", accuracy(fixture.train)},
                   {"test", accuracy(fixture.test)},
                   {"perturbed", accuracy(fixture.perturbed)}};
  emit(f.output, j.dump(2) + "\n", out);
  return kExitOk;
}

void add_output(CLI::App* app, std::string& output) {
  app->add_option("-o,--output", output, "Output path, '-' for standard output")
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Surprise adequacy and coverage toolkit for recorded activation traces",
               args.empty() ? "surprisal" : args.front());
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  const auto criterion_names =
      std::vector<std::string>{"lsc", "dsc", "nc", "kmnc", "nbc", "snac"};
  const auto source_names = std::vector<std::string>{"predicted", "ground_truth"};

  LsaFlags lsa;
  CLI::App* lsa_cmd = app.add_subcommand("lsa", "Likelihood-based surprise of each test input");
  lsa_cmd->add_option("--train", lsa.train, "Training trace manifest")->required();
  lsa_cmd->add_option("--test", lsa.test, "Test trace manifest")->required();
  lsa.selector.attach(lsa_cmd);
  lsa_cmd->add_option("-t,--t", lsa.t, "Variance threshold for dropping neurons")
      ->capture_default_str();
  lsa_cmd
      ->add_option("--per-class", lsa.per_class,
                   "Training labels for per-class densities, or 'none' for one density")
      ->check(CLI::IsMember({"predicted", "ground_truth", "none"}))
      ->capture_default_str();
  lsa_cmd
      ->add_option("--query-labels", lsa.query_labels,
                   "Labels choosing each test input's density (default: as --per-class)")
      ->check(CLI::IsMember(source_names));
  add_output(lsa_cmd, lsa.output);

  DsaFlags dsa;
  CLI::App* dsa_cmd = app.add_subcommand("dsa", "Distance-based surprise of each test input");
  dsa_cmd->add_option("--train", dsa.train, "Training trace manifest")->required();
  dsa_cmd->add_option("--test", dsa.test, "Test trace manifest")->required();
  dsa.selector.attach(dsa_cmd);
  dsa_cmd->add_option("--train-labels", dsa.train_labels, "Labels grouping the training traces")
      ->check(CLI::IsMember(source_names))
      ->capture_default_str();
  dsa_cmd->add_option("--query-labels", dsa.query_labels, "Labels of the test inputs")
      ->check(CLI::IsMember(source_names))
      ->capture_default_str();
  dsa_cmd->add_flag("--exclude-self", dsa.exclude_self,
                    "Test set is the training set; skip each row's own trace");
  add_output(dsa_cmd, dsa.output);

  CoverageFlags cov;
  CLI::App* cov_cmd = app.add_subcommand("coverage", "Coverage of one or more input batches");
  cov_cmd->add_option("--criterion", cov.criterion, "Coverage criterion")
      ->check(CLI::IsMember(criterion_names));
  cov_cmd->add_option("--sa-file", cov.sa_file, "First SA report (lsc, dsc)");
  cov_cmd->add_option("--test", cov.test, "First trace manifest (nc, kmnc, nbc, snac)");
  cov_cmd->add_option("--add", cov.add, "Further batches, accumulated in order");
  cov_cmd->add_option("--train", cov.train, "Training manifest for neuron ranges");
  cov.selector.attach(cov_cmd);
  cov_cmd->add_option("--n", cov.n, "Number of SA buckets");
  cov_cmd->add_option("--ub", cov.ub, "Upper bound U of the SA buckets");
  cov_cmd->add_option("--k", cov.k, "KMNC sections per neuron")->capture_default_str();
  cov_cmd->add_option("--th", cov.th, "NC activation threshold")->capture_default_str();
  cov_cmd->add_option("--scaling", cov.scaling, "NC scaling of each input's layer values")
      ->check(CLI::IsMember({"minmax", "raw"}))
      ->capture_default_str();
  cov_cmd->add_option("--suggest-ub", cov.suggest_ub,
                      "Print a percentile of this SA report as a candidate --ub and exit");
  cov_cmd->add_option("--percentile", cov.percentile, "Percentile for --suggest-ub, in [0, 1]")
      ->capture_default_str();
  add_output(cov_cmd, cov.output);

  DetectFlags det;
  CLI::App* det_cmd =
      app.add_subcommand("detect", "Logistic-regression detector over SA of two input sets");
  det_cmd->add_option("--sa-file", det.original, "SA report of original inputs (repeat per layer)")
      ->required();
  det_cmd
      ->add_option("--sa-file-adv", det.adversarial,
                   "SA report of adversarial inputs (repeat per layer)")
      ->required();
  det_cmd->add_option("--train-per-class", det.train_per_class, "Training rows drawn per set")
      ->capture_default_str();
  det_cmd->add_option("--seed", det.seed, "Seed of the train/test split")->capture_default_str();
  det_cmd->add_option("--l2", det.logistic.l2, "L2 penalty on the weights")
      ->capture_default_str();
  det_cmd->add_option("--max-iters", det.logistic.max_iters, "Gradient descent iterations")
      ->capture_default_str();
  det_cmd->add_option("--tol", det.logistic.tol, "Convergence tolerance")->capture_default_str();
  add_output(det_cmd, det.output);

  SampleFlags smp;
  CLI::App* smp_cmd = app.add_subcommand("sample", "Draw inputs from SA ranges");
  smp_cmd->add_option("--sa-file", smp.sa_file, "SA report to sample from")->required();
  smp_cmd->add_option("--ub", smp.ub, "Upper bound U; samples [0, U/4] .. [0, U]");
  smp_cmd->add_option("--low", smp.low, "Low end of a single range (default 0)");
  smp_cmd->add_option("--high", smp.high, "High end of a single range");
  smp_cmd->add_option("--count", smp.count, "Inputs per range")->capture_default_str();
  smp_cmd->add_option("--seed", smp.seed, "Sampling seed")->capture_default_str();
  add_output(smp_cmd, smp.output);

  CurveFlags crv;
  CLI::App* crv_cmd =
      app.add_subcommand("curve", "Accuracy of test subsets taken in SA order");
  crv_cmd->add_option("--sa-file", crv.sa_file, "SA report of the test inputs")->required();
  crv_cmd->add_option("--test", crv.test, "Test manifest with predicted and true labels")
      ->required();
  crv_cmd->add_option("--direction", crv.direction, "Ordering of the inputs")
      ->check(CLI::IsMember({"ascending", "descending", "random", "all"}))
      ->capture_default_str();
  crv_cmd->add_option("--steps", crv.steps, "Number of subset sizes")->capture_default_str();
  crv_cmd->add_option("--seed", crv.seed, "Seed of the random ordering")->capture_default_str();
  add_output(crv_cmd, crv.output);

  FixtureFlags fix;
  CLI::App* fix_cmd =
      app.add_subcommand("fixture", "Write a seeded toy network's traces as trace files");
  fix_cmd->add_option("--out", fix.out_dir, "Directory receiving train/, test/, perturbed/")
      ->required();
  fix_cmd->add_option("--seed", fix.options.seed, "Fixture seed")->capture_default_str();
  fix_cmd->add_option("--n-train", fix.options.n_train, "Training inputs")->capture_default_str();
  fix_cmd->add_option("--n-test", fix.options.n_test, "Clean and perturbed test inputs each")
      ->capture_default_str();
  fix_cmd->add_option("--classes", fix.options.n_classes, "Number of classes")
      ->capture_default_str();
  fix_cmd->add_option("--d-in", fix.options.d_in, "Input width")->capture_default_str();
  fix_cmd->add_option("--hidden", fix.hidden, "Hidden layer widths")->capture_default_str();
  fix_cmd->add_option("--separation", fix.options.center_separation,
                      "Distance between class centers")
      ->capture_default_str();
  fix_cmd->add_option("--perturbation", fix.options.perturbation,
                      "Fraction of the way toward another class center")
      ->capture_default_str();
  add_output(fix_cmd, fix.output);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("surprisal");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (lsa_cmd->parsed()) return run_lsa(lsa, out);
    if (dsa_cmd->parsed()) return run_dsa(dsa, out);
    if (cov_cmd->parsed()) return run_coverage(cov, out);
    if (det_cmd->parsed()) return run_detect(det, out);
    if (smp_cmd->parsed()) return run_sample(smp, out);
    if (crv_cmd->parsed()) return run_curve(crv, out);
    return run_fixture(fix, out);
  } catch (const UsageError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << one_line(e.what()) << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: io: " << one_line(e.what()) << '\n';
    return kExitData;
  }
}

}  // namespace surprisal::cli
