#pragma once

#include "lgclvo/lgc.hpp"

#include <string>
#include <vector>

namespace lgclvo {

enum class StopKind { fixed_count, q_threshold };

struct StoppingRule {
  StopKind kind = StopKind::fixed_count;
  std::size_t budget = 0;  // fixed_count: number of removals
  double tau = 0.8;        // q_threshold: stop when q* > -tau

  static StoppingRule fixed(std::size_t budget) { return {StopKind::fixed_count, budget, 0.0}; }
  static StoppingRule threshold(double tau) { return {StopKind::q_threshold, 0, tau}; }
};

enum class StopReason { budget_exhausted, threshold_reached, all_labels_removed };
const char* to_string(StopReason r);

struct FilterStep {
  int position = 0;         // row within the labeled block
  int instance_index = 0;   // original dataset index
  int removed_class = 0;
  int suggested_class = 0;
  double q_value = 0.0;
};

struct FilterResult {
  std::vector<FilterStep> steps;
  StopReason stop_reason = StopReason::budget_exhausted;
  std::string method = "lgc_lvo";

  std::vector<int> noisy_indices() const;
  std::vector<int> suggested_classes() const;
  std::vector<double> q_values() const;
};

// Mutable state of one filter run over the labeled block.
struct FilterState {
  RowMatrix p_tilde;         // l x l, zero diagonal
  RowMatrix y_l;             // l x c binary
  RowMatrix f;               // p_tilde * (active rows of y_l)
  std::vector<bool> active;  // per labeled position

  static FilterState init(const RowMatrix& p_tilde, const RowMatrix& y_l);
};

// Row-normalize f; rows with zero sum fall back to the matching row of y.
RowMatrix to_class_probabilities(const RowMatrix& f, const RowMatrix& y);

// Q = to_class_probabilities(f, y) - y, with inactive rows zeroed.
RowMatrix difference_matrix(const RowMatrix& f, const RowMatrix& y,
                            const std::vector<bool>& active);

struct Selection {
  int position = 0;
  int removed_class = 0;
  int suggested_class = 0;
  double q_value = 0.0;
};

// argmin Q over active rows, then argmax over that row; ties to lowest index.
Selection select_noisy(const RowMatrix& q, const std::vector<bool>& active);

// Deactivate position i* and subtract its column of p_tilde from f column j*.
void remove_contribution(FilterState& state, int position, int removed_class);

FilterResult run_filter(const RowMatrix& p_tilde, const RowMatrix& y_l,
                        const StoppingRule& rule,
                        const std::vector<int>& labeled_indices = {});

// Full-LGC leave-one-out prediction for labeled instance i (test oracle).
Eigen::RowVectorXd leave_one_out_row(const NormalizedOperator& s, const RowMatrix& y,
                                     const LgcParams& params, int i);

std::string filter_result_to_json(const FilterResult& result);
void save_filter_result(const FilterResult& result, const std::string& path);

}  // namespace lgclvo
