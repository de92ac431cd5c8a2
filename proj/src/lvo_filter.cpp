#include "lgclvo/lvo_filter.hpp"

#include "lgclvo/kernels.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace lgclvo {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::budget_exhausted: return "budget_exhausted";
    case StopReason::threshold_reached: return "threshold_reached";
    case StopReason::all_labels_removed: return "all_labels_removed";
  }
  return "unknown";
}

std::vector<int> FilterResult::noisy_indices() const {
  std::vector<int> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.instance_index);
  return out;
}

std::vector<int> FilterResult::suggested_classes() const {
  std::vector<int> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.suggested_class);
  return out;
}

std::vector<double> FilterResult::q_values() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.q_value);
  return out;
}

FilterState FilterState::init(const RowMatrix& p_tilde, const RowMatrix& y_l) {
  if (p_tilde.rows() != p_tilde.cols())
    throw std::invalid_argument("p_tilde must be square");
  if (y_l.rows() != p_tilde.rows())
    throw std::invalid_argument("y_l row count must match p_tilde");
  if ((p_tilde.array() < 0.0).any())
    throw std::invalid_argument("p_tilde must be nonnegative");

  FilterState st;
  st.p_tilde = p_tilde;
  st.p_tilde.diagonal().setZero();  // remove label self-influence
  st.y_l = y_l;
  st.active.assign(std::size_t(y_l.rows()), true);
  st.f = st.p_tilde * y_l;
  return st;
}

RowMatrix to_class_probabilities(const RowMatrix& f, const RowMatrix& y) {
  RowMatrix out(f.rows(), f.cols());
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double s = kern::sum(f.data() + i * f.cols(), std::size_t(f.cols()));
    if (s > 0.0)
      out.row(i) = f.row(i) / s;
    else
      out.row(i) = y.row(i);
  }
  return out;
}

RowMatrix difference_matrix(const RowMatrix& f, const RowMatrix& y,
                            const std::vector<bool>& active) {
  RowMatrix q = to_class_probabilities(f, y) - y;
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    if (!active[std::size_t(i)]) q.row(i).setZero();
  return q;
}

Selection select_noisy(const RowMatrix& q, const std::vector<bool>& active) {
  Selection sel;
  bool found = false;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    if (!active[std::size_t(i)]) continue;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      if (!found || q(i, j) < sel.q_value) {
        sel.position = int(i);
        sel.removed_class = int(j);
        sel.q_value = q(i, j);
        found = true;
      }
    }
  }
  if (!found) throw std::runtime_error("select_noisy: no active labeled positions");

  // Suggested class: argmax over the selected row, lowest index on ties.
  sel.suggested_class = 0;
  double best = q(sel.position, 0);
  for (Eigen::Index j = 1; j < q.cols(); ++j)
    if (q(sel.position, j) > best) {
      best = q(sel.position, j);
      sel.suggested_class = int(j);
    }
  return sel;
}

void remove_contribution(FilterState& state, int position, int removed_class) {
  if (!state.active[std::size_t(position)])
    throw std::runtime_error("remove_contribution: position already inactive");
  state.active[std::size_t(position)] = false;
  // f[:, j*] -= p_tilde[:, i*]; O(l) via strided axpy on the column.
  const Eigen::Index l = state.p_tilde.rows();
  for (Eigen::Index r = 0; r < l; ++r)
    state.f(r, removed_class) -= state.p_tilde(r, position);
}

FilterResult run_filter(const RowMatrix& p_tilde, const RowMatrix& y_l,
                        const StoppingRule& rule,
                        const std::vector<int>& labeled_indices) {
  if (!labeled_indices.empty() &&
      Eigen::Index(labeled_indices.size()) != p_tilde.rows())
    throw std::invalid_argument("labeled_indices length must match p_tilde");
  if (rule.kind == StopKind::fixed_count && rule.budget > std::size_t(p_tilde.rows()))
    throw std::invalid_argument("budget exceeds number of labels");
  if (rule.kind == StopKind::q_threshold && (rule.tau <= 0.0 || rule.tau > 1.0))
    throw std::invalid_argument("tau must be in (0, 1]");

  FilterState st = FilterState::init(p_tilde, y_l);
  FilterResult result;

  for (;;) {
    if (rule.kind == StopKind::fixed_count && result.steps.size() >= rule.budget) {
      result.stop_reason = StopReason::budget_exhausted;
      break;
    }
    std::size_t remaining = 0;
    for (bool a : st.active) remaining += a ? 1 : 0;
    if (remaining == 0) {
      result.stop_reason = StopReason::all_labels_removed;
      break;
    }

    const RowMatrix q = difference_matrix(st.f, st.y_l, st.active);
    const Selection sel = select_noisy(q, st.active);
    if (rule.kind == StopKind::q_threshold && sel.q_value > -rule.tau) {
      result.stop_reason = StopReason::threshold_reached;
      break;
    }

    // Remove at the row's actual label class. The argmin class coincides
    // with it whenever the minimum is strictly negative, but a tie at zero
    // (fallback rows) could otherwise point the subtraction at the wrong
    // column and break f >= 0.
    int label_class = sel.removed_class;
    for (Eigen::Index j = 0; j < st.y_l.cols(); ++j)
      if (st.y_l(sel.position, j) != 0.0) {
        label_class = int(j);
        break;
      }

    FilterStep step;
    step.position = sel.position;
    step.instance_index = labeled_indices.empty() ? sel.position
                                                  : labeled_indices[std::size_t(sel.position)];
    step.removed_class = label_class;
    step.suggested_class = sel.suggested_class;
    step.q_value = sel.q_value;
    result.steps.push_back(step);

    remove_contribution(st, sel.position, label_class);
  }
  return result;
}

Eigen::RowVectorXd leave_one_out_row(const NormalizedOperator& s, const RowMatrix& y,
                                     const LgcParams& params, int i) {
  RowMatrix y_prime = y;
  y_prime.row(i).setZero();
  return lgc_closed(s, y_prime, params).values.row(i);
}

std::string filter_result_to_json(const FilterResult& result) {
  nlohmann::json j;
  j["method"] = result.method;
  j["stop_reason"] = to_string(result.stop_reason);
  j["steps"] = nlohmann::json::array();
  for (const auto& s : result.steps)
    j["steps"].push_back({{"instance_index", s.instance_index},
                          {"removed_class", s.removed_class},
                          {"suggested_class", s.suggested_class},
                          {"q_value", s.q_value}});
  return j.dump(2);
}

void save_filter_result(const FilterResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write filter result: " + path);
  out << filter_result_to_json(result) << "\n";
}

}  // namespace lgclvo
