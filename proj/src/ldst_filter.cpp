#include "lgclvo/ldst_filter.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace lgclvo {

RowMatrix full_propagation(const NormalizedOperator& s, const LgcParams& params) {
  const Eigen::Index n = s.s.n;
  if (n > params.dense_guard)
    throw std::runtime_error("full propagation matrix refused: n = " + std::to_string(n) +
                             " exceeds dense guard " + std::to_string(params.dense_guard));
  const double alpha = params.alpha;
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("alpha must be in (0,1)");

  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - alpha * Eigen::MatrixXd(s.s.dense());
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("dense factorization failed (system not SPD?)");
  return (1.0 - alpha) * llt.solve(Eigen::MatrixXd::Identity(n, n));
}

LdstOperator build_ldst_operator(const NormalizedOperator& s, const LgcParams& params) {
  const Eigen::Index n = s.s.n;
  const Eigen::MatrixXd p = full_propagation(s, params);
  const Eigen::MatrixXd lsym = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(s.s.dense());
  const Eigen::MatrixXd pmi = p - Eigen::MatrixXd::Identity(n, n);

  LdstOperator op;
  op.mu = mu_from_alpha(params.alpha);
  op.a = p.transpose() * lsym * p + op.mu * (pmi * pmi);
  return op;
}

RowMatrix ldst_gradient(const LdstOperator& op, const RowMatrix& y) {
  if (y.rows() != op.a.rows()) throw std::invalid_argument("Y must have n rows");
  return op.a * y;
}

void ldst_gradient_downdate(const LdstOperator& op, RowMatrix& q, int i, int j) {
  q.col(j) -= op.a.col(i);
}

LdstSelection select_removal_adapted(const RowMatrix& q, const RowMatrix& y,
                                     const std::vector<bool>& active) {
  LdstSelection sel;
  bool found = false;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    if (!active[std::size_t(i)]) continue;
    // The class this instance currently holds.
    int label = -1;
    for (Eigen::Index j = 0; j < y.cols(); ++j)
      if (y(i, j) != 0.0) {
        label = int(j);
        break;
      }
    if (label < 0) continue;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      if (int(j) == label) continue;  // must differ from the held class
      if (!found || q(i, j) < sel.q_value) {
        sel.instance = int(i);
        sel.gradient_class = int(j);
        sel.label_class = label;
        sel.q_value = q(i, j);
        found = true;
      }
    }
  }
  if (!found) throw std::runtime_error("select_removal_adapted: no active labeled positions");
  return sel;
}

FilterResult run_ldst_filter(const NormalizedOperator& s, const RowMatrix& y,
                             const std::vector<int>& labeled_indices,
                             const LgcParams& params, const StoppingRule& rule) {
  const Eigen::Index n = s.s.n;
  if (y.rows() != n) throw std::invalid_argument("Y must have n rows");
  if (rule.kind == StopKind::fixed_count && rule.budget > labeled_indices.size())
    throw std::invalid_argument("budget exceeds number of labels");

  const LdstOperator op = build_ldst_operator(s, params);
  RowMatrix y_cur = y;
  RowMatrix q = ldst_gradient(op, y_cur);

  std::vector<bool> active(std::size_t(n), false);
  for (int idx : labeled_indices) active[std::size_t(idx)] = true;

  FilterResult result;
  result.method = "ldst_adapted";
  for (;;) {
    if (rule.kind == StopKind::fixed_count && result.steps.size() >= rule.budget) {
      result.stop_reason = StopReason::budget_exhausted;
      break;
    }
    std::size_t remaining = 0;
    for (bool a : active) remaining += a ? 1 : 0;
    if (remaining == 0) {
      result.stop_reason = StopReason::all_labels_removed;
      break;
    }

    const LdstSelection sel = select_removal_adapted(q, y_cur, active);
    if (rule.kind == StopKind::q_threshold && sel.q_value > -rule.tau) {
      result.stop_reason = StopReason::threshold_reached;
      break;
    }

    FilterStep step;
    step.position = sel.instance;
    step.instance_index = sel.instance;
    step.removed_class = sel.label_class;
    step.suggested_class = sel.gradient_class;
    step.q_value = sel.q_value;
    result.steps.push_back(step);

    active[std::size_t(sel.instance)] = false;
    y_cur.row(sel.instance).setZero();
    ldst_gradient_downdate(op, q, sel.instance, sel.label_class);
  }
  return result;
}

}  // namespace lgclvo
