#include "lgclvo/lgc.hpp"

#include <Eigen/Dense>
#include <fstream>
#include <stdexcept>

namespace lgclvo {

double alpha_from_mu(double mu) {
  if (mu <= 0.0) throw std::invalid_argument("mu must be positive");
  return 1.0 / (1.0 + mu);
}

double mu_from_alpha(double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("alpha must be in (0,1)");
  return 1.0 / alpha - 1.0;
}

namespace {

// Shared diffusion loop; `init` is both F(0) and the forcing term.
void iterate(const CsrMatrix& s, const RowMatrix& init, const LgcParams& params,
             RowMatrix& f, int& iterations, bool& converged) {
  const double alpha = params.alpha;
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("alpha must be in (0,1)");

  f = init;
  RowMatrix sf;
  converged = false;
  iterations = 0;
  for (int t = 0; t < params.max_iterations; ++t) {
    s.multiply(f, sf);
    sf *= alpha;
    sf += (1.0 - alpha) * init;
    const double delta = (sf - f).cwiseAbs().maxCoeff();
    f.swap(sf);
    ++iterations;
    if (delta < params.tolerance) {
      converged = true;
      break;
    }
  }
}

}  // namespace

ClassScores lgc_iterate(const NormalizedOperator& s, const RowMatrix& y,
                        const LgcParams& params) {
  if (y.rows() != s.s.n) throw std::invalid_argument("Y must have n rows");
  ClassScores out;
  iterate(s.s, y, params, out.values, out.iterations_used, out.converged);
  return out;
}

ClassScores lgc_closed(const NormalizedOperator& s, const RowMatrix& y,
                       const LgcParams& params) {
  const Eigen::Index n = s.s.n;
  if (y.rows() != n) throw std::invalid_argument("Y must have n rows");
  if (n > params.dense_guard)
    throw std::runtime_error("dense solve refused: n = " + std::to_string(n) +
                             " exceeds guard " + std::to_string(params.dense_guard));
  const double alpha = params.alpha;
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("alpha must be in (0,1)");

  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - alpha * s.s.dense().matrix();
  // I - alpha*S is symmetric positive-definite.
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("dense factorization failed (system not SPD?)");

  ClassScores out;
  out.values = (1.0 - alpha) * llt.solve(Eigen::MatrixXd(y));
  out.iterations_used = 0;
  out.converged = true;
  return out;
}

PropagationSubmatrix propagation_submatrix(const NormalizedOperator& s,
                                           const std::vector<int>& labeled_indices,
                                           const LgcParams& params) {
  if (labeled_indices.empty()) throw std::invalid_argument("labeled_indices must be non-empty");
  const Eigen::Index n = s.s.n;
  const Eigen::Index l = Eigen::Index(labeled_indices.size());

  RowMatrix init = RowMatrix::Zero(n, l);
  for (Eigen::Index col = 0; col < l; ++col) {
    const int row = labeled_indices[std::size_t(col)];
    if (row < 0 || Eigen::Index(row) >= n)
      throw std::invalid_argument("labeled index out of range");
    if (init.row(row).sum() != 0.0)
      throw std::invalid_argument("labeled indices must be distinct");
    init(row, col) = 1.0;
  }

  PropagationSubmatrix out;
  out.alpha = params.alpha;
  RowMatrix f;
  iterate(s.s, init, params, f, out.iterations_used, out.converged);

  out.values.resize(l, l);
  for (Eigen::Index r = 0; r < l; ++r)
    out.values.row(r) = f.row(labeled_indices[std::size_t(r)]);
  return out;
}

void save_submatrix(const PropagationSubmatrix& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write submatrix file: " + path);
  out.precision(17);
  out << p.values.rows() << " " << p.alpha << " " << p.iterations_used << " "
      << (p.converged ? 1 : 0) << "\n";
  for (Eigen::Index i = 0; i < p.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.values.cols(); ++j) {
      if (j) out << " ";
      out << p.values(i, j);
    }
    out << "\n";
  }
}

PropagationSubmatrix load_submatrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open submatrix file: " + path);
  Eigen::Index l;
  int conv;
  PropagationSubmatrix p;
  if (!(in >> l >> p.alpha >> p.iterations_used >> conv))
    throw std::runtime_error(path + ": bad submatrix header");
  p.converged = conv != 0;
  p.values.resize(l, l);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < l; ++j)
      if (!(in >> p.values(i, j)))
        throw std::runtime_error(path + ": truncated submatrix data");
  return p;
}

}  // namespace lgclvo
