#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lgclvo/lgc.hpp"
#include "oracles.hpp"

#include <cstdio>

using namespace lgclvo;

namespace {

NormalizedOperator empty_operator(Eigen::Index n) {
  NormalizedOperator s;
  s.s.n = n;
  s.s.row_ptr.assign(std::size_t(n) + 1, 0);
  return s;
}

}  // namespace

TEST_CASE("alpha_from_mu") {
  CHECK(alpha_from_mu(1.0 / 9.0) == doctest::Approx(0.9));
  CHECK(alpha_from_mu(1.0) == doctest::Approx(0.5));
  CHECK(alpha_from_mu(1e9) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK_THROWS_AS(alpha_from_mu(0.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_from_mu(-1.0), std::invalid_argument);
  CHECK(mu_from_alpha(0.9) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("all-zero Y is a fixed point of the iteration") {
  oracles::RandomInstance inst = oracles::random_instance(20, 1);
  RowMatrix y = RowMatrix::Zero(20, 2);
  ClassScores f = lgc_iterate(inst.s, y, {});
  CHECK(f.values.isZero());
  CHECK(f.converged);
}

TEST_CASE("diffusion cannot cross disconnected components") {
  // Two tight pairs far apart; label one vertex of the first pair.
  RowMatrix x(4, 1);
  x << 0.0, 0.1, 100.0, 100.1;
  SparseSymmetricGraph g = build_symmetric_knn_rbf(x, 1, 0.1);
  NormalizedOperator s = s_matrix(g, degree(g));
  RowMatrix y = RowMatrix::Zero(4, 2);
  y(0, 0) = 1.0;
  LgcParams params;
  params.alpha = 0.5;
  ClassScores f = lgc_iterate(s, y, params);
  CHECK(f.values(2, 0) == doctest::Approx(0.0));
  CHECK(f.values(3, 0) == doctest::Approx(0.0));
  CHECK(f.values(0, 0) > 0.0);
}

TEST_CASE("iteration matches the dense closed form") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    oracles::RandomInstance inst = oracles::random_instance(30, seed + 10);
    RowMatrix y = oracles::random_indicator(30, 3, 6, seed);
    LgcParams params;
    params.alpha = 0.9;
    params.tolerance = 1e-12;
    ClassScores it = lgc_iterate(inst.s, y, params);
    ClassScores cl = lgc_closed(inst.s, y, params);
    CHECK(it.converged);
    CHECK((it.values - cl.values).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("converged iterates satisfy the stationarity residual") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    oracles::RandomInstance inst = oracles::random_instance(40, seed + 30);
    RowMatrix y = oracles::random_indicator(40, 2, 8, seed);
    LgcParams params;
    params.alpha = 0.8;
    ClassScores f = lgc_iterate(inst.s, y, params);
    REQUIRE(f.converged);
    Eigen::MatrixXd s = oracles::dense_s(inst.graph);
    Eigen::MatrixXd residual =
        (Eigen::MatrixXd::Identity(40, 40) - params.alpha * s) * Eigen::MatrixXd(f.values) -
        (1.0 - params.alpha) * Eigen::MatrixXd(y);
    CHECK(residual.cwiseAbs().maxCoeff() <= params.tolerance * (1.0 + params.alpha) * 10);
  }
}

TEST_CASE("non-convergence is flagged, not thrown") {
  oracles::RandomInstance inst = oracles::random_instance(30, 2);
  RowMatrix y = oracles::random_indicator(30, 2, 5, 0);
  LgcParams params;
  params.alpha = 0.99;
  params.tolerance = 1e-14;
  params.max_iterations = 3;
  ClassScores f = lgc_iterate(inst.s, y, params);
  CHECK_FALSE(f.converged);
  CHECK(f.iterations_used == 3);
}

TEST_CASE("closed form scalar cases") {
  NormalizedOperator s = empty_operator(1);
  RowMatrix y(1, 2);
  y << 1.0, 0.0;
  LgcParams params;
  params.alpha = 0.7;
  ClassScores f = lgc_closed(s, y, params);
  CHECK(f.values(0, 0) == doctest::Approx(0.3));  // (1-alpha) Y with no edges

  params.alpha = 1e-12;
  // alpha -> 0 limit: F -> Y
  oracles::RandomInstance inst = oracles::random_instance(10, 3);
  RowMatrix y10 = oracles::random_indicator(10, 2, 4, 1);
  ClassScores f2 = lgc_closed(inst.s, y10, params);
  CHECK((f2.values - y10).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("closed form residual on a random graph") {
  oracles::RandomInstance inst = oracles::random_instance(30, 8);
  RowMatrix y = oracles::random_indicator(30, 3, 7, 2);
  LgcParams params;
  params.alpha = 0.9;
  ClassScores f = lgc_closed(inst.s, y, params);
  Eigen::MatrixXd s = oracles::dense_s(inst.graph);
  Eigen::MatrixXd residual =
      (Eigen::MatrixXd::Identity(30, 30) - params.alpha * s) * Eigen::MatrixXd(f.values) -
      (1.0 - params.alpha) * Eigen::MatrixXd(y);
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dense guard refuses large systems") {
  oracles::RandomInstance inst = oracles::random_instance(30, 4);
  RowMatrix y = oracles::random_indicator(30, 2, 5, 3);
  LgcParams params;
  params.dense_guard = 10;
  CHECK_THROWS_AS(lgc_closed(inst.s, y, params), std::runtime_error);
}

TEST_CASE("propagation submatrix with all vertices labeled is the full matrix") {
  oracles::RandomInstance inst = oracles::random_instance(15, 5);
  std::vector<int> all(15);
  for (int i = 0; i < 15; ++i) all[std::size_t(i)] = i;
  LgcParams params;
  params.alpha = 0.6;
  params.tolerance = 1e-12;
  PropagationSubmatrix p = propagation_submatrix(inst.s, all, params);
  Eigen::MatrixXd expect = oracles::dense_propagation(inst.graph, params.alpha);
  CHECK(p.converged);
  CHECK((Eigen::MatrixXd(p.values) - expect).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("edgeless graph gives (1-alpha) I") {
  NormalizedOperator s = empty_operator(6);
  LgcParams params;
  params.alpha = 0.9;
  PropagationSubmatrix p = propagation_submatrix(s, {1, 3, 5}, params);
  Eigen::MatrixXd expect = 0.1 * Eigen::MatrixXd::Identity(3, 3);
  CHECK((Eigen::MatrixXd(p.values) - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("submatrix matches the dense inverse labeled block") {
  for (double alpha : {0.5, 0.9, 0.99}) {
    oracles::RandomInstance inst = oracles::random_instance(60, 42);
    std::vector<int> labeled;
    RowMatrix y = oracles::random_indicator(60, 2, 12, 9, &labeled);
    LgcParams params;
    params.alpha = alpha;
    params.tolerance = 1e-12;
    PropagationSubmatrix p = propagation_submatrix(inst.s, labeled, params);
    Eigen::MatrixXd full = oracles::dense_propagation(inst.graph, alpha);
    for (std::size_t r = 0; r < labeled.size(); ++r)
      for (std::size_t c = 0; c < labeled.size(); ++c)
        CHECK(p.values(Eigen::Index(r), Eigen::Index(c)) ==
              doctest::Approx(full(labeled[r], labeled[c])).epsilon(1e-6));
  }
}

TEST_CASE("partial geometric sums are monotone and the limit nonnegative") {
  oracles::RandomInstance inst = oracles::random_instance(25, 13);
  const double alpha = 0.9;
  Eigen::MatrixXd s = oracles::dense_s(inst.graph);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(25, 25);
  Eigen::MatrixXd partial = term;
  for (int t = 0; t < 100; ++t) {
    term = alpha * (s * term);
    CHECK((term.array() >= -1e-15).all());  // each series term nonnegative
    partial += term;
  }
  // The converged submatrix inherits nonnegativity from the series.
  LgcParams params;
  params.alpha = alpha;
  PropagationSubmatrix sub = propagation_submatrix(inst.s, {0, 5, 10, 20}, params);
  CHECK((sub.values.array() >= 0.0).all());
}

TEST_CASE("submatrix rejects bad labeled sets") {
  oracles::RandomInstance inst = oracles::random_instance(10, 6);
  CHECK_THROWS_AS(propagation_submatrix(inst.s, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(propagation_submatrix(inst.s, {1, 1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(propagation_submatrix(inst.s, {99}, {}), std::invalid_argument);
}

TEST_CASE("submatrix round-trips through the cache file") {
  oracles::RandomInstance inst = oracles::random_instance(12, 7);
  LgcParams params;
  PropagationSubmatrix p = propagation_submatrix(inst.s, {0, 3, 7}, params);
  const std::string path = "/tmp/lgclvo_test_submatrix.txt";
  save_submatrix(p, path);
  PropagationSubmatrix q = load_submatrix(path);
  CHECK(q.alpha == doctest::Approx(p.alpha));
  CHECK(q.iterations_used == p.iterations_used);
  CHECK(q.converged == p.converged);
  CHECK((q.values - p.values).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}
