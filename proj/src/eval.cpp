#include "lgclvo/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>

namespace lgclvo {

std::vector<CurvePoint> precision_curve(const FilterResult& log, const NoiseRecord& truth) {
  std::set<int> corrupted(truth.corrupted_indices.begin(), truth.corrupted_indices.end());
  std::vector<CurvePoint> curve;
  curve.reserve(log.steps.size());
  int hits = 0;
  int m = 0;
  for (const auto& step : log.steps) {
    ++m;
    if (corrupted.count(step.instance_index)) ++hits;
    CurvePoint pt;
    pt.removed_count = m;
    pt.precision = double(hits) / double(m);
    pt.recall = corrupted.empty() ? 0.0 : double(hits) / double(corrupted.size());
    curve.push_back(pt);
  }
  return curve;
}

std::pair<std::optional<double>, std::optional<double>>
accuracy_split(const std::vector<int>& predicted, const Dataset& data,
               const LabelAssignment& assignment) {
  const std::size_t n = std::size_t(data.size());
  if (predicted.size() != n)
    throw std::invalid_argument("predictions must cover all instances");

  std::vector<bool> labeled(n, false);
  for (int idx : assignment.labeled_indices) labeled[std::size_t(idx)] = true;

  std::size_t lab_total = 0, lab_hit = 0, unl_total = 0, unl_hit = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool hit = predicted[i] == data.true_classes[i];
    if (labeled[i]) {
      ++lab_total;
      lab_hit += hit ? 1 : 0;
    } else {
      ++unl_total;
      unl_hit += hit ? 1 : 0;
    }
  }
  std::optional<double> unl, lab;
  if (unl_total > 0) unl = double(unl_hit) / double(unl_total);
  if (lab_total > 0) lab = double(lab_hit) / double(lab_total);
  return {unl, lab};
}

std::vector<int> predict_classes(const RowMatrix& scores) {
  std::vector<int> out(std::size_t(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (Eigen::Index j = 1; j < scores.cols(); ++j)
      if (scores(i, j) > scores(i, best)) best = int(j);
    out[std::size_t(i)] = best;
  }
  return out;
}

std::vector<int> embed_filter_and_classify(const Dataset& data,
                                           const LabelAssignment& assignment,
                                           const NormalizedOperator& s,
                                           const LgcParams& params,
                                           const StoppingRule& rule,
                                           CorrectionMode correction,
                                           FilterResult* log_out) {
  const PropagationSubmatrix p =
      propagation_submatrix(s, assignment.labeled_indices, params);

  RowMatrix y = assignment.indicator(data.size(), data.class_count);
  RowMatrix y_l(Eigen::Index(assignment.count()), data.class_count);
  for (std::size_t r = 0; r < assignment.count(); ++r)
    y_l.row(Eigen::Index(r)) = y.row(assignment.labeled_indices[r]);

  const FilterResult log = run_filter(p.values, y_l, rule, assignment.labeled_indices);
  if (log_out) *log_out = log;

  for (const auto& step : log.steps) {
    y.row(step.instance_index).setZero();
    if (correction == CorrectionMode::replace)
      y(step.instance_index, step.suggested_class) = 1.0;
  }
  return predict_classes(lgc_iterate(s, y, params).values);
}

namespace {

void accumulate(std::map<std::string, std::vector<double>>& samples,
                const std::string& key, std::optional<double> v) {
  if (v) samples[key].push_back(*v);
}

}  // namespace

AggregateReport aggregate(const std::vector<TrialOutcome>& trials) {
  if (trials.empty()) throw std::invalid_argument("aggregate needs at least one trial");

  std::map<std::string, std::vector<double>> samples;
  for (const auto& t : trials) {
    accumulate(samples, "unlabeled_accuracy", t.unlabeled_accuracy);
    accumulate(samples, "labeled_accuracy", t.labeled_accuracy);
    if (!t.precision_recall_curve.empty()) {
      accumulate(samples, "final_precision", t.precision_recall_curve.back().precision);
      accumulate(samples, "final_recall", t.precision_recall_curve.back().recall);
    }
    accumulate(samples, "removed_count", double(t.filter_log.steps.size()));
  }

  AggregateReport report;
  report.trial_count = trials.size();
  for (auto& [key, xs] : samples) {
    MetricSummary m;
    double sum = 0.0;
    for (double x : xs) sum += x;
    m.mean = sum / double(xs.size());
    if (xs.size() >= 2) {
      double ss = 0.0;
      for (double x : xs) ss += (x - m.mean) * (x - m.mean);
      m.stddev = std::sqrt(ss / double(xs.size() - 1));
    }
    report.metrics[key] = m;
  }
  return report;
}

std::string report_to_json(const AggregateReport& report) {
  nlohmann::json j;
  j["trial_count"] = report.trial_count;
  for (const auto& [key, m] : report.metrics) {
    j["metrics"][key]["mean"] = m.mean;
    if (m.stddev) j["metrics"][key]["stddev"] = *m.stddev;
  }
  return j.dump(2);
}

void save_curve_csv(const std::vector<CurvePoint>& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write curve file: " + path);
  out << "removed_count,precision,recall\n";
  out.precision(17);
  for (const auto& pt : curve)
    out << pt.removed_count << "," << pt.precision << "," << pt.recall << "\n";
}

}  // namespace lgclvo
