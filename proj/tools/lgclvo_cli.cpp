// lgclvo: command-line front end for graph construction, label-noise
// filtering, classification, and multi-seed benchmarks.
//
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 guard
// violation (e.g. a dense operation refused by the memory guard).

#include "lgclvo/eval.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lgclvo;

namespace {

// ---------------------------------------------------------------- errors

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- config

struct ExperimentConfig {
  std::string dataset = "blobs";  // blobs | csv | idx
  std::string data_path;          // csv path, or "images,labels" for idx
  std::string label_column = "label";
  long long blob_n = 400;
  long long blob_d = 3;
  int blob_c = 2;
  double blob_separation = 8.0;

  int k = 15;
  double sigma = 0.0;  // 0 = heuristic
  double alpha = 0.9;
  double mu = -1.0;  // >= 0 overrides alpha via alpha = 1/(1+mu)
  double tolerance = 1e-9;
  int max_iterations = 10000;
  long long dense_guard = 10000;

  long long labels = 50;
  double noise = 0.0;
  std::string seeds = "0";
  std::string filter = "lvo";  // lvo | ldst | none
  long long budget = -1;       // -1 = exact injected noise count
  double tau = 0.0;            // > 0 switches to the threshold rule
  std::string correction = "remove";
  int jobs = 1;
  std::string out = "out";

  LgcParams lgc() const {
    LgcParams p;
    p.alpha = mu >= 0.0 ? alpha_from_mu(mu) : alpha;
    p.tolerance = tolerance;
    p.max_iterations = max_iterations;
    p.dense_guard = Eigen::Index(dense_guard);
    return p;
  }

  json resolved() const {
    json j;
    j["dataset"] = dataset;
    j["data_path"] = data_path;
    j["label_column"] = label_column;
    j["blob_n"] = blob_n;
    j["blob_d"] = blob_d;
    j["blob_c"] = blob_c;
    j["blob_separation"] = blob_separation;
    j["k"] = k;
    j["sigma"] = sigma;
    j["alpha"] = lgc().alpha;
    j["tolerance"] = tolerance;
    j["max_iterations"] = max_iterations;
    j["dense_guard"] = dense_guard;
    j["labels"] = labels;
    j["noise"] = noise;
    j["seeds"] = seeds;
    j["filter"] = filter;
    j["budget"] = budget;
    j["tau"] = tau;
    j["correction"] = correction;
    j["jobs"] = jobs;
    j["out"] = out;
    return j;
  }
};

void add_common_options(CLI::App& cmd, ExperimentConfig& cfg, std::string& config_path) {
  cmd.add_option("--config", config_path, "Flat key=value config file; flags override");
  cmd.add_option("--dataset", cfg.dataset, "Dataset source: blobs, csv, idx")
      ->check(CLI::IsMember({"blobs", "csv", "idx"}));
  cmd.add_option("--data", cfg.data_path,
                 "csv path, or 'images,labels' pair for idx");
  cmd.add_option("--label-column", cfg.label_column, "Class column in csv input");
  cmd.add_option("--blob-n", cfg.blob_n, "Synthetic instance count");
  cmd.add_option("--blob-d", cfg.blob_d, "Synthetic dimensionality");
  cmd.add_option("--blob-c", cfg.blob_c, "Synthetic class count");
  cmd.add_option("--blob-separation", cfg.blob_separation, "Cluster center spacing");
  cmd.add_option("--k", cfg.k, "Neighbors per instance in the kNN graph");
  cmd.add_option("--sigma", cfg.sigma, "RBF bandwidth; 0 = mean-distance heuristic");
  cmd.add_option("--alpha", cfg.alpha, "Diffusion decay in (0,1)")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  cmd.add_option("--mu", cfg.mu, "Fit trade-off; when >= 0 sets alpha = 1/(1+mu)");
  cmd.add_option("--tolerance", cfg.tolerance, "Diffusion convergence tolerance");
  cmd.add_option("--max-iterations", cfg.max_iterations, "Diffusion iteration cap");
  cmd.add_option("--dense-guard", cfg.dense_guard, "Largest n allowed in dense solves");
  cmd.add_option("--labels", cfg.labels, "Number of labeled instances");
  cmd.add_option("--noise", cfg.noise, "Fraction of labels flipped")
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--seeds", cfg.seeds, "Seed list: '0,1,2' or a range '0..19'");
  cmd.add_option("--filter", cfg.filter, "Noise filter: lvo, ldst, none")
      ->check(CLI::IsMember({"lvo", "ldst", "none"}));
  cmd.add_option("--budget", cfg.budget,
                 "Removals before stopping; -1 = exact injected noise count");
  cmd.add_option("--tau", cfg.tau, "Threshold rule cutoff; 0 keeps the fixed budget");
  cmd.add_option("--correction", cfg.correction, "Flagged labels: remove or replace")
      ->check(CLI::IsMember({"remove", "replace"}));
  cmd.add_option("--jobs", cfg.jobs, "Parallel trials")->check(CLI::PositiveNumber);
  cmd.add_option("--out", cfg.out, "Output directory");
}

// Applies key=value pairs from a config file to every config field whose
// flag of the same name was not given on the command line.
void apply_config_file(const std::string& path, ExperimentConfig& cfg, CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);

  std::map<std::string, std::function<void(const std::string&)>> setters{
      {"dataset", [&](const std::string& v) { cfg.dataset = v; }},
      {"data", [&](const std::string& v) { cfg.data_path = v; }},
      {"label-column", [&](const std::string& v) { cfg.label_column = v; }},
      {"blob-n", [&](const std::string& v) { cfg.blob_n = std::stoll(v); }},
      {"blob-d", [&](const std::string& v) { cfg.blob_d = std::stoll(v); }},
      {"blob-c", [&](const std::string& v) { cfg.blob_c = std::stoi(v); }},
      {"blob-separation", [&](const std::string& v) { cfg.blob_separation = std::stod(v); }},
      {"k", [&](const std::string& v) { cfg.k = std::stoi(v); }},
      {"sigma", [&](const std::string& v) { cfg.sigma = std::stod(v); }},
      {"alpha", [&](const std::string& v) { cfg.alpha = std::stod(v); }},
      {"mu", [&](const std::string& v) { cfg.mu = std::stod(v); }},
      {"tolerance", [&](const std::string& v) { cfg.tolerance = std::stod(v); }},
      {"max-iterations", [&](const std::string& v) { cfg.max_iterations = std::stoi(v); }},
      {"dense-guard", [&](const std::string& v) { cfg.dense_guard = std::stoll(v); }},
      {"labels", [&](const std::string& v) { cfg.labels = std::stoll(v); }},
      {"noise", [&](const std::string& v) { cfg.noise = std::stod(v); }},
      {"seeds", [&](const std::string& v) { cfg.seeds = v; }},
      {"filter", [&](const std::string& v) { cfg.filter = v; }},
      {"budget", [&](const std::string& v) { cfg.budget = std::stoll(v); }},
      {"tau", [&](const std::string& v) { cfg.tau = std::stod(v); }},
      {"correction", [&](const std::string& v) { cfg.correction = v; }},
      {"jobs", [&](const std::string& v) { cfg.jobs = std::stoi(v); }},
      {"out", [&](const std::string& v) { cfg.out = v; }},
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) +
                                                  ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) +
                                                  ": unknown key '" + key + "'");
    if (cmd.count("--" + key) == 0) it->second(value);  // flags win
  }
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  const auto range = spec.find("..");
  if (range != std::string::npos) {
    const std::uint64_t lo = std::stoull(spec.substr(0, range));
    const std::uint64_t hi = std::stoull(spec.substr(range + 2));
    if (hi < lo) throw CLI::ValidationError("--seeds", "range is empty");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "no seeds given");
  return seeds;
}

// ------------------------------------------------------------- utilities

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t hash_string(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  return fnv1a(s.data(), s.size(), h);
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// All file output goes through a temp file plus rename so readers never see
// partial content.
void atomic_write(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::uint64_t hash_graph(const SparseSymmetricGraph& g) {
  std::uint64_t h = fnv1a(&g.weights.n, sizeof g.weights.n);
  h = fnv1a(g.weights.col_idx.data(), g.weights.col_idx.size() * sizeof(int), h);
  h = fnv1a(g.weights.values.data(), g.weights.values.size() * sizeof(double), h);
  return h;
}

std::uint64_t hash_labeled_set(const std::vector<int>& idx) {
  return fnv1a(idx.data(), idx.size() * sizeof(int));
}

// ----------------------------------------------------------- experiment

struct Prepared {
  Dataset data;
  SparseSymmetricGraph graph;
  NormalizedOperator s;
  double sigma_used = 0.0;
  std::uint64_t content_hash = 0;
};

Dataset load_dataset(const ExperimentConfig& cfg, std::uint64_t seed) {
  try {
    if (cfg.dataset == "blobs")
      return generate_gaussian_blobs(cfg.blob_n, cfg.blob_d, cfg.blob_c,
                                     cfg.blob_separation, seed);
    if (cfg.dataset == "csv") {
      if (cfg.data_path.empty()) throw DataError("--data is required for csv input");
      return load_dense_csv(cfg.data_path, cfg.label_column);
    }
    const auto comma = cfg.data_path.find(',');
    if (comma == std::string::npos)
      throw DataError("--data must be 'images,labels' for idx input");
    return load_idx(cfg.data_path.substr(0, comma), cfg.data_path.substr(comma + 1));
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
}

Prepared prepare(const ExperimentConfig& cfg, std::uint64_t seed) {
  Prepared prep;
  prep.data = load_dataset(cfg, seed);
  prep.sigma_used = cfg.sigma > 0.0 ? cfg.sigma : sigma_heuristic(prep.data.features);
  prep.graph = build_symmetric_knn_rbf(prep.data.features, cfg.k, prep.sigma_used);
  prep.s = s_matrix(prep.graph, degree(prep.graph));
  prep.content_hash =
      hash_string(cfg.resolved().dump(),
                  fnv1a(prep.data.features.data(),
                        std::size_t(prep.data.features.size()) * sizeof(double)));
  return prep;
}

StoppingRule resolve_rule(const ExperimentConfig& cfg, std::size_t noise_count) {
  if (cfg.tau > 0.0) return StoppingRule::threshold(cfg.tau);
  const std::size_t budget =
      cfg.budget >= 0 ? std::size_t(cfg.budget) : noise_count;
  return StoppingRule::fixed(budget);
}

// Propagation submatrix with a disk cache keyed by everything that
// determines its content.
PropagationSubmatrix cached_submatrix(const ExperimentConfig& cfg,
                                      const NormalizedOperator& s,
                                      const SparseSymmetricGraph& graph,
                                      const std::vector<int>& labeled,
                                      const LgcParams& params, bool* cache_hit) {
  std::uint64_t key = hash_graph(graph);
  key = fnv1a(&params.alpha, sizeof params.alpha, key);
  key = fnv1a(&params.tolerance, sizeof params.tolerance, key);
  key ^= hash_labeled_set(labeled);

  const fs::path path = fs::path(cfg.out) / "cache" / ("submatrix_" + hex(key) + ".txt");
  if (fs::exists(path)) {
    if (cache_hit) *cache_hit = true;
    return load_submatrix(path.string());
  }
  if (cache_hit) *cache_hit = false;
  PropagationSubmatrix p = propagation_submatrix(s, labeled, params);
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  save_submatrix(p, tmp.string());
  fs::rename(tmp, path);
  return p;
}

FilterResult apply_filter(const ExperimentConfig& cfg, const Prepared& prep,
                          const LabelAssignment& assignment, const NoiseRecord& noise,
                          const LgcParams& params, bool* cache_hit = nullptr) {
  const StoppingRule rule = resolve_rule(cfg, noise.corrupted_indices.size());
  if (cfg.filter == "none") {
    FilterResult empty;
    empty.method = "none";
    empty.stop_reason = StopReason::budget_exhausted;
    return empty;
  }
  if (cfg.filter == "ldst") {
    if (prep.data.size() > params.dense_guard)
      throw GuardError("ldst needs the dense n x n operator; n = " +
                       std::to_string(prep.data.size()) + " exceeds the dense guard " +
                       std::to_string(params.dense_guard));
    RowMatrix y = assignment.indicator(prep.data.size(), prep.data.class_count);
    return run_ldst_filter(prep.s, y, assignment.labeled_indices, params, rule);
  }
  const PropagationSubmatrix p = cached_submatrix(cfg, prep.s, prep.graph,
                                                  assignment.labeled_indices, params, cache_hit);
  RowMatrix y = assignment.indicator(prep.data.size(), prep.data.class_count);
  RowMatrix y_l(Eigen::Index(assignment.count()), prep.data.class_count);
  for (std::size_t r = 0; r < assignment.count(); ++r)
    y_l.row(Eigen::Index(r)) = y.row(assignment.labeled_indices[r]);
  return run_filter(p.values, y_l, rule, assignment.labeled_indices);
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const Prepared& prep,
                       std::uint64_t seed) {
  const LgcParams params = cfg.lgc();
  LabelAssignment clean = sample_labels(prep.data, std::size_t(cfg.labels),
                                        derive_seed(seed, 1));
  auto [assignment, noise] = corrupt_labels(prep.data, clean, cfg.noise,
                                            derive_seed(seed, 2));

  TrialOutcome trial;
  trial.seed = seed;
  trial.filter_log = apply_filter(cfg, prep, assignment, noise, params);
  trial.precision_recall_curve = precision_curve(trial.filter_log, noise);

  RowMatrix y = assignment.indicator(prep.data.size(), prep.data.class_count);
  const CorrectionMode mode = cfg.correction == "replace" ? CorrectionMode::replace
                                                          : CorrectionMode::remove;
  for (const auto& step : trial.filter_log.steps) {
    y.row(step.instance_index).setZero();
    if (mode == CorrectionMode::replace)
      y(step.instance_index, step.suggested_class) = 1.0;
  }
  const std::vector<int> predicted = predict_classes(lgc_iterate(prep.s, y, params).values);
  auto [unl, lab] = accuracy_split(predicted, prep.data, assignment);
  trial.unlabeled_accuracy = unl;
  trial.labeled_accuracy = lab;
  return trial;
}

json trial_to_json(const TrialOutcome& t) {
  json j;
  j["seed"] = t.seed;
  j["removed_count"] = t.filter_log.steps.size();
  j["stop_reason"] = to_string(t.filter_log.stop_reason);
  if (t.unlabeled_accuracy) j["unlabeled_accuracy"] = *t.unlabeled_accuracy;
  if (t.labeled_accuracy) j["labeled_accuracy"] = *t.labeled_accuracy;
  if (!t.precision_recall_curve.empty()) {
    j["final_precision"] = t.precision_recall_curve.back().precision;
    j["final_recall"] = t.precision_recall_curve.back().recall;
  }
  return j;
}

// -------------------------------------------------------------- commands

int cmd_graph_build(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t seed = parse_seeds(cfg.seeds).front();
  const Prepared prep = prepare(cfg, seed);
  const auto t1 = std::chrono::steady_clock::now();

  fs::create_directories(cfg.out);
  const fs::path graph_path = fs::path(cfg.out) / "graph.txt";
  const fs::path tmp = graph_path.string() + ".tmp";
  save_graph(prep.graph, tmp.string());
  fs::rename(tmp, graph_path);

  json meta;
  meta["config"] = cfg.resolved();
  meta["content_hash"] = hex(prep.content_hash);
  meta["n"] = prep.data.size();
  meta["edges"] = prep.graph.weights.values.size() / 2;
  meta["k"] = cfg.k;
  meta["sigma_used"] = prep.sigma_used;
  meta["build_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  atomic_write(fs::path(cfg.out) / "graph_meta.json", meta.dump(2) + "\n");

  std::cout << "graph: n=" << prep.data.size() << " k=" << cfg.k
            << " sigma=" << prep.sigma_used << " -> " << graph_path.string() << "\n";
  return 0;
}

int cmd_filter_run(const ExperimentConfig& cfg) {
  const std::uint64_t seed = parse_seeds(cfg.seeds).front();
  const Prepared prep = prepare(cfg, seed);
  const LgcParams params = cfg.lgc();

  LabelAssignment clean = sample_labels(prep.data, std::size_t(cfg.labels),
                                        derive_seed(seed, 1));
  auto [assignment, noise] = corrupt_labels(prep.data, clean, cfg.noise,
                                            derive_seed(seed, 2));

  bool cache_hit = false;
  const FilterResult result = apply_filter(cfg, prep, assignment, noise, params, &cache_hit);

  json j = json::parse(filter_result_to_json(result));
  j["config"] = cfg.resolved();
  j["content_hash"] = hex(prep.content_hash);
  j["submatrix_cache_hit"] = cache_hit;
  atomic_write(fs::path(cfg.out) / "filter_result.json", j.dump(2) + "\n");

  std::cout << "filter " << result.method << ": removed " << result.steps.size()
            << " of " << assignment.count() << " labels ("
            << to_string(result.stop_reason) << ")";
  if (cfg.filter == "lvo")
    std::cout << (cache_hit ? ", submatrix from cache" : ", submatrix computed");
  std::cout << "\n";
  for (const auto& s : result.steps)
    std::cout << "  instance " << s.instance_index << " class " << s.removed_class
              << " -> " << s.suggested_class << " (q=" << s.q_value << ")\n";
  return 0;
}

int cmd_classify(const ExperimentConfig& cfg) {
  const std::uint64_t seed = parse_seeds(cfg.seeds).front();
  const Prepared prep = prepare(cfg, seed);
  const TrialOutcome trial = run_trial(cfg, prep, seed);

  json j = trial_to_json(trial);
  j["config"] = cfg.resolved();
  j["content_hash"] = hex(prep.content_hash);
  atomic_write(fs::path(cfg.out) / "classify_result.json", j.dump(2) + "\n");

  std::cout << "classify (" << cfg.filter << ", " << cfg.correction << "):";
  if (trial.unlabeled_accuracy)
    std::cout << " unlabeled_acc=" << *trial.unlabeled_accuracy;
  if (trial.labeled_accuracy)
    std::cout << " labeled_acc=" << *trial.labeled_accuracy;
  std::cout << " removed=" << trial.filter_log.steps.size() << "\n";
  return 0;
}

int cmd_bench(const ExperimentConfig& cfg) {
  const std::vector<std::uint64_t> seeds = parse_seeds(cfg.seeds);
  const Prepared prep = prepare(cfg, seeds.front());

  std::vector<TrialOutcome> outcomes(seeds.size());
  std::vector<std::string> failures;
  std::mutex mtx;
  std::size_t next = 0;

  auto worker = [&] {
    for (;;) {
      std::size_t idx;
      {
        std::lock_guard<std::mutex> lock(mtx);
        if (next >= seeds.size()) return;
        idx = next++;
      }
      try {
        // Per-seed dataset for synthetic sources; shared otherwise.
        if (cfg.dataset == "blobs") {
          const Prepared local = prepare(cfg, seeds[idx]);
          outcomes[idx] = run_trial(cfg, local, seeds[idx]);
        } else {
          outcomes[idx] = run_trial(cfg, prep, seeds[idx]);
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mtx);
        failures.push_back("seed " + std::to_string(seeds[idx]) + ": " + e.what());
      }
    }
  };
  const int nthreads = std::min<int>(cfg.jobs, int(seeds.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  fs::create_directories(cfg.out);
  json report;
  report["config"] = cfg.resolved();
  report["content_hash"] = hex(prep.content_hash);
  report["trials"] = json::array();

  std::vector<TrialOutcome> completed;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const bool ok = std::none_of(failures.begin(), failures.end(),
                                 [&](const std::string& f) {
                                   return f.rfind("seed " + std::to_string(seeds[i]) + ":", 0) == 0;
                                 });
    if (!ok) continue;
    completed.push_back(outcomes[i]);
    report["trials"].push_back(trial_to_json(outcomes[i]));
    save_curve_csv(outcomes[i].precision_recall_curve,
                   (fs::path(cfg.out) / ("curve_seed" + std::to_string(seeds[i]) + ".csv"))
                       .string());
  }

  if (!completed.empty()) {
    const AggregateReport agg = aggregate(completed);
    report["aggregate"] = json::parse(report_to_json(agg));
  }

  if (!failures.empty()) {
    report["failures"] = failures;
    atomic_write(fs::path(cfg.out) / "report_partial.json", report.dump(2) + "\n");
    for (const auto& f : failures) std::cerr << "trial failed: " << f << "\n";
    return 2;
  }

  atomic_write(fs::path(cfg.out) / "report.json", report.dump(2) + "\n");
  std::cout << "bench: " << completed.size() << " trials";
  if (report.contains("aggregate") &&
      report["aggregate"]["metrics"].contains("unlabeled_accuracy"))
    std::cout << ", mean unlabeled_acc = "
              << double(report["aggregate"]["metrics"]["unlabeled_accuracy"]["mean"]);
  std::cout << " -> " << (fs::path(cfg.out) / "report.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label-noise filtering for graph-based semi-supervised classification"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path;

  CLI::App* graph = app.add_subcommand("graph", "Graph artifacts");
  graph->require_subcommand(1);
  CLI::App* graph_build = graph->add_subcommand("build", "Build and save the kNN graph");
  add_common_options(*graph_build, cfg, config_path);

  CLI::App* filter = app.add_subcommand("filter", "Noise filters");
  filter->require_subcommand(1);
  CLI::App* filter_run = filter->add_subcommand("run", "Run the configured filter once");
  add_common_options(*filter_run, cfg, config_path);

  CLI::App* classify = app.add_subcommand("classify", "Filter, correct, classify");
  add_common_options(*classify, cfg, config_path);

  CLI::App* bench = app.add_subcommand("bench", "Multi-seed benchmark with reports");
  add_common_options(*bench, cfg, config_path);

  try {
    app.parse(argc, argv);
    if (!config_path.empty()) {
      CLI::App* active = graph_build->parsed()  ? graph_build
                         : filter_run->parsed() ? filter_run
                         : classify->parsed()   ? classify
                                                : bench;
      apply_config_file(config_path, cfg, *active);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (graph_build->parsed()) return cmd_graph_build(cfg);
    if (filter_run->parsed()) return cmd_filter_run(cfg);
    if (classify->parsed()) return cmd_classify(cfg);
    return cmd_bench(cfg);
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
