#pragma once

// Independent test oracles: dense, brute-force recomputations that never go
// through the CSR/iteration code paths they are used to check.

#include "lgclvo/graph.hpp"
#include "lgclvo/lgc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <vector>

namespace oracles {

using lgclvo::RowMatrix;

inline Eigen::MatrixXd dense_weights(const lgclvo::SparseSymmetricGraph& g) {
  return Eigen::MatrixXd(g.weights.dense());
}

inline Eigen::MatrixXd dense_laplacian(const lgclvo::SparseSymmetricGraph& g) {
  Eigen::MatrixXd w = dense_weights(g);
  Eigen::VectorXd d = w.rowwise().sum();
  return Eigen::MatrixXd(d.asDiagonal()) - w;
}

inline Eigen::MatrixXd dense_s(const lgclvo::SparseSymmetricGraph& g) {
  Eigen::MatrixXd w = dense_weights(g);
  Eigen::VectorXd d = w.rowwise().sum();
  Eigen::VectorXd inv_sqrt(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    inv_sqrt[i] = d[i] > 0.0 ? 1.0 / std::sqrt(d[i]) : 0.0;
  return inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
}

// (1-alpha)(I - alpha S)^{-1} by explicit dense inversion.
inline Eigen::MatrixXd dense_propagation(const lgclvo::SparseSymmetricGraph& g, double alpha) {
  Eigen::MatrixXd s = dense_s(g);
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(s.rows(), s.cols()) - alpha * s;
  return (1.0 - alpha) * sys.inverse();
}

// Exhaustive O(n^2) neighbor search by full pairwise-distance sort.
inline std::vector<std::vector<int>> brute_knn(const RowMatrix& x, int k) {
  const Eigen::Index n = x.rows();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> dist;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      dist.emplace_back((x.row(i) - x.row(j)).squaredNorm(), int(j));
    }
    std::sort(dist.begin(), dist.end());
    for (int p = 0; p < k; ++p) out[std::size_t(i)].push_back(dist[std::size_t(p)].second);
  }
  return out;
}

// Random geometric-ish dataset plus graph for small-instance tests.
struct RandomInstance {
  RowMatrix features;
  lgclvo::SparseSymmetricGraph graph;
  lgclvo::NormalizedOperator s;
};

inline RandomInstance random_instance(Eigen::Index n, std::uint64_t seed, int k = 5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RandomInstance inst;
  inst.features.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) inst.features(i, j) = gauss(rng);
  const double sigma = lgclvo::sigma_heuristic(inst.features);
  inst.graph = lgclvo::build_symmetric_knn_rbf(inst.features, k, sigma);
  inst.s = lgclvo::s_matrix(inst.graph, lgclvo::degree(inst.graph));
  return inst;
}

// Random label indicator over a subset of rows.
inline RowMatrix random_indicator(Eigen::Index n, int c, Eigen::Index l,
                                  std::uint64_t seed, std::vector<int>* indices = nullptr) {
  std::mt19937_64 rng(seed);
  std::vector<int> rows(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) rows[std::size_t(i)] = int(i);
  std::shuffle(rows.begin(), rows.end(), rng);
  rows.resize(std::size_t(l));
  std::sort(rows.begin(), rows.end());
  RowMatrix y = RowMatrix::Zero(n, c);
  std::uniform_int_distribution<int> cls(0, c - 1);
  for (int r : rows) y(r, cls(rng)) = 1.0;
  if (indices) *indices = rows;
  return y;
}

}  // namespace oracles
