#pragma once

#include "lgclvo/ldst_filter.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lgclvo {

struct CurvePoint {
  int removed_count = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct TrialOutcome {
  std::uint64_t seed = 0;
  FilterResult filter_log;
  std::optional<double> unlabeled_accuracy;
  std::optional<double> labeled_accuracy;
  std::vector<CurvePoint> precision_recall_curve;
};

struct MetricSummary {
  double mean = 0.0;
  std::optional<double> stddev;  // sample std; absent with a single trial
};

struct AggregateReport {
  std::map<std::string, MetricSummary> metrics;
  std::size_t trial_count = 0;
};

enum class CorrectionMode { remove, replace };

std::vector<CurvePoint> precision_curve(const FilterResult& log, const NoiseRecord& truth);

// (unlabeled_acc, labeled_acc); absent when the respective set is empty.
std::pair<std::optional<double>, std::optional<double>>
accuracy_split(const std::vector<int>& predicted, const Dataset& data,
               const LabelAssignment& assignment);

// argmax class per row, ties to lowest class index.
std::vector<int> predict_classes(const RowMatrix& scores);

// Filter, rebuild Y with flagged labels removed or replaced, run LGC, argmax.
std::vector<int> embed_filter_and_classify(const Dataset& data,
                                           const LabelAssignment& assignment,
                                           const NormalizedOperator& s,
                                           const LgcParams& params,
                                           const StoppingRule& rule,
                                           CorrectionMode correction,
                                           FilterResult* log_out = nullptr);

AggregateReport aggregate(const std::vector<TrialOutcome>& trials);

std::string report_to_json(const AggregateReport& report);
void save_curve_csv(const std::vector<CurvePoint>& curve, const std::string& path);

}  // namespace lgclvo
