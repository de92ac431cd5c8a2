#pragma once

#include "lgclvo/dataset.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace lgclvo {

// Compressed-sparse-row square matrix, used for W and S.
struct CsrMatrix {
  Eigen::Index n = 0;
  std::vector<std::size_t> row_ptr;  // size n+1
  std::vector<int> col_idx;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  // out (n x m) = this * in (n x m); rows of `in`/`out` contiguous.
  void multiply(const RowMatrix& in, RowMatrix& out) const;
  RowMatrix dense() const;
};

struct SparseSymmetricGraph {
  CsrMatrix weights;  // symmetric, zero diagonal, entries in (0,1]
  int k = 0;
  double sigma = 0.0;

  Eigen::Index size() const { return weights.n; }
};

using DegreeVector = Eigen::VectorXd;

struct NormalizedOperator {
  CsrMatrix s;  // D^{-1/2} W D^{-1/2}; rows/cols of isolated vertices are zero
};

enum class SmoothnessVariant { unnormalized, symmetric };

// For each instance, the k nearest distinct other instances, ascending by
// distance, ties to the lower index. Exhaustive search, parallel over rows.
std::vector<std::vector<int>> knn_indices(const RowMatrix& features, int k);

// Mean distance to the min(10, n-1)-th nearest neighbor.
double sigma_heuristic(const RowMatrix& features);

SparseSymmetricGraph build_symmetric_knn_rbf(const RowMatrix& features, int k, double sigma);

DegreeVector degree(const SparseSymmetricGraph& graph);

NormalizedOperator s_matrix(const SparseSymmetricGraph& graph, const DegreeVector& degrees);

// Quadratic form via the local-difference sum; f is n x m (m >= 1).
double smoothness(const RowMatrix& f, const SparseSymmetricGraph& graph,
                  SmoothnessVariant variant);

void save_graph(const SparseSymmetricGraph& graph, const std::string& path);
SparseSymmetricGraph load_graph(const std::string& path);

}  // namespace lgclvo
