#include "lgclvo/graph.hpp"

#include "lgclvo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace lgclvo {

void CsrMatrix::multiply(const RowMatrix& in, RowMatrix& out) const {
  const Eigen::Index m = in.cols();
  out.setZero(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    double* out_row = out.data() + i * m;
    for (std::size_t p = row_ptr[std::size_t(i)]; p < row_ptr[std::size_t(i) + 1]; ++p)
      kern::axpy(values[p], in.data() + Eigen::Index(col_idx[p]) * m, out_row, std::size_t(m));
  }
}

RowMatrix CsrMatrix::dense() const {
  RowMatrix d = RowMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (std::size_t p = row_ptr[std::size_t(i)]; p < row_ptr[std::size_t(i) + 1]; ++p)
      d(i, col_idx[p]) = values[p];
  return d;
}

namespace {

void parallel_rows(Eigen::Index n, const std::function<void(Eigen::Index, Eigen::Index)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const Eigen::Index chunk = std::max<Eigen::Index>(64, (n + Eigen::Index(hw) - 1) / Eigen::Index(hw));
  if (n <= chunk) {
    body(0, n);
    return;
  }
  std::vector<std::thread> workers;
  for (Eigen::Index begin = 0; begin < n; begin += chunk) {
    const Eigen::Index end = std::min(n, begin + chunk);
    workers.emplace_back(body, begin, end);
  }
  for (auto& t : workers) t.join();
}

// Distances from row i to all other rows, as (distance, index) pairs.
void all_distances(const RowMatrix& x, Eigen::Index i,
                   std::vector<std::pair<double, int>>& out) {
  const Eigen::Index n = x.rows();
  const std::size_t d = std::size_t(x.cols());
  out.clear();
  out.reserve(std::size_t(n) - 1);
  const double* xi = x.data() + i * Eigen::Index(d);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) continue;
    out.emplace_back(kern::squared_distance(xi, x.data() + j * Eigen::Index(d), d), int(j));
  }
}

}  // namespace

std::vector<std::vector<int>> knn_indices(const RowMatrix& features, int k) {
  const Eigen::Index n = features.rows();
  if (k < 1 || Eigen::Index(k) >= n)
    throw std::invalid_argument("need 1 <= k < n for kNN search");

  std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(n));
  parallel_rows(n, [&](Eigen::Index begin, Eigen::Index end) {
    std::vector<std::pair<double, int>> dist;
    for (Eigen::Index i = begin; i < end; ++i) {
      all_distances(features, i, dist);
      std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
      auto& out = neighbors[std::size_t(i)];
      out.resize(std::size_t(k));
      for (int p = 0; p < k; ++p) out[std::size_t(p)] = dist[std::size_t(p)].second;
    }
  });
  return neighbors;
}

double sigma_heuristic(const RowMatrix& features) {
  const Eigen::Index n = features.rows();
  if (n < 2) throw std::invalid_argument("sigma heuristic needs n >= 2");
  const int m = int(std::min<Eigen::Index>(10, n - 1));

  std::vector<double> mth(static_cast<std::size_t>(n));
  parallel_rows(n, [&](Eigen::Index begin, Eigen::Index end) {
    std::vector<std::pair<double, int>> dist;
    for (Eigen::Index i = begin; i < end; ++i) {
      all_distances(features, i, dist);
      std::nth_element(dist.begin(), dist.begin() + (m - 1), dist.end());
      mth[std::size_t(i)] = std::sqrt(dist[std::size_t(m - 1)].first);
    }
  });
  return kern::sum(mth.data(), mth.size()) / double(n);
}

SparseSymmetricGraph build_symmetric_knn_rbf(const RowMatrix& features, int k, double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  const Eigen::Index n = features.rows();
  const auto nn = knn_indices(features, k);

  // Union-symmetrize the directed kNN relation.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j : nn[std::size_t(i)]) {
      adj[std::size_t(i)].push_back(j);
      adj[std::size_t(j)].push_back(int(i));
    }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }

  SparseSymmetricGraph g;
  g.k = k;
  g.sigma = sigma;
  CsrMatrix& w = g.weights;
  w.n = n;
  w.row_ptr.assign(std::size_t(n) + 1, 0);
  for (Eigen::Index i = 0; i < n; ++i)
    w.row_ptr[std::size_t(i) + 1] = w.row_ptr[std::size_t(i)] + adj[std::size_t(i)].size();
  w.col_idx.resize(w.row_ptr.back());
  w.values.resize(w.row_ptr.back());

  const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
  const std::size_t d = std::size_t(features.cols());
  parallel_rows(n, [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index i = begin; i < end; ++i) {
      std::size_t p = w.row_ptr[std::size_t(i)];
      const double* xi = features.data() + i * Eigen::Index(d);
      for (int j : adj[std::size_t(i)]) {
        const double sq = kern::squared_distance(xi, features.data() + Eigen::Index(j) * Eigen::Index(d), d);
        w.col_idx[p] = j;
        w.values[p] = std::exp(-sq * inv_two_sigma_sq);
        ++p;
      }
    }
  });
  return g;
}

DegreeVector degree(const SparseSymmetricGraph& graph) {
  const CsrMatrix& w = graph.weights;
  DegreeVector d(w.n);
  for (Eigen::Index i = 0; i < w.n; ++i)
    d[i] = kern::sum(w.values.data() + w.row_ptr[std::size_t(i)],
                     w.row_ptr[std::size_t(i) + 1] - w.row_ptr[std::size_t(i)]);
  return d;
}

NormalizedOperator s_matrix(const SparseSymmetricGraph& graph, const DegreeVector& degrees) {
  const CsrMatrix& w = graph.weights;
  NormalizedOperator op;
  op.s = w;
  std::vector<double> inv_sqrt(std::size_t(w.n));
  for (Eigen::Index i = 0; i < w.n; ++i)
    inv_sqrt[std::size_t(i)] = degrees[i] > 0.0 ? 1.0 / std::sqrt(degrees[i]) : 0.0;
  for (Eigen::Index i = 0; i < w.n; ++i)
    for (std::size_t p = w.row_ptr[std::size_t(i)]; p < w.row_ptr[std::size_t(i) + 1]; ++p)
      op.s.values[p] = w.values[p] * inv_sqrt[std::size_t(i)] * inv_sqrt[std::size_t(w.col_idx[p])];
  return op;
}

double smoothness(const RowMatrix& f, const SparseSymmetricGraph& graph,
                  SmoothnessVariant variant) {
  const CsrMatrix& w = graph.weights;
  if (f.rows() != w.n) throw std::invalid_argument("smoothness: f must have n rows");
  const Eigen::Index m = f.cols();

  RowMatrix g = f;
  if (variant == SmoothnessVariant::symmetric) {
    const DegreeVector d = degree(graph);
    for (Eigen::Index i = 0; i < w.n; ++i) {
      const double s = d[i] > 0.0 ? 1.0 / std::sqrt(d[i]) : 0.0;
      g.row(i) *= s;
    }
  }

  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.n; ++i)
    for (std::size_t p = w.row_ptr[std::size_t(i)]; p < w.row_ptr[std::size_t(i) + 1]; ++p) {
      const Eigen::Index j = w.col_idx[p];
      for (Eigen::Index col = 0; col < m; ++col) {
        const double diff = g(i, col) - g(j, col);
        acc += w.values[p] * diff * diff;
      }
    }
  return 0.5 * acc;
}

void save_graph(const SparseSymmetricGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  out.precision(17);
  out << graph.weights.n << " " << graph.k << " " << graph.sigma << "\n";
  const CsrMatrix& w = graph.weights;
  for (Eigen::Index i = 0; i < w.n; ++i)
    for (std::size_t p = w.row_ptr[std::size_t(i)]; p < w.row_ptr[std::size_t(i) + 1]; ++p)
      if (Eigen::Index(w.col_idx[p]) > i)
        out << i << " " << w.col_idx[p] << " " << w.values[p] << "\n";
}

SparseSymmetricGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  Eigen::Index n;
  SparseSymmetricGraph g;
  if (!(in >> n >> g.k >> g.sigma))
    throw std::runtime_error(path + ": bad graph header (want 'n k sigma')");

  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  Eigen::Index i;
  int j;
  double w;
  while (in >> i >> j >> w) {
    if (i < 0 || i >= n || j < 0 || Eigen::Index(j) >= n || Eigen::Index(j) <= i)
      throw std::runtime_error(path + ": bad triplet (need 0 <= i < j < n)");
    adj[std::size_t(i)].emplace_back(j, w);
    adj[std::size_t(j)].emplace_back(int(i), w);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());

  CsrMatrix& m = g.weights;
  m.n = n;
  m.row_ptr.assign(std::size_t(n) + 1, 0);
  for (Eigen::Index r = 0; r < n; ++r)
    m.row_ptr[std::size_t(r) + 1] = m.row_ptr[std::size_t(r)] + adj[std::size_t(r)].size();
  m.col_idx.resize(m.row_ptr.back());
  m.values.resize(m.row_ptr.back());
  for (Eigen::Index r = 0; r < n; ++r) {
    std::size_t p = m.row_ptr[std::size_t(r)];
    for (auto [c, v] : adj[std::size_t(r)]) {
      m.col_idx[p] = c;
      m.values[p] = v;
      ++p;
    }
  }
  return g;
}

}  // namespace lgclvo
