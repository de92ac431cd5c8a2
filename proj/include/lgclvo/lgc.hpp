#pragma once

#include "lgclvo/graph.hpp"

#include <string>
#include <vector>

namespace lgclvo {

struct LgcParams {
  double alpha = 0.9;        // in (0,1)
  double tolerance = 1e-9;   // max-norm change between iterates
  int max_iterations = 10000;
  Eigen::Index dense_guard = 10000;  // largest n allowed for dense solves
};

struct ClassScores {
  RowMatrix values;  // rows x c
  int iterations_used = 0;
  bool converged = true;
};

// l x l labeled block of the scaled propagation matrix (1-alpha)(I-alpha S)^{-1}.
struct PropagationSubmatrix {
  RowMatrix values;
  double alpha = 0.0;
  int iterations_used = 0;
  bool converged = true;
};

double alpha_from_mu(double mu);
double mu_from_alpha(double alpha);

// Diffusion iteration F(t+1) = alpha*S*F(t) + (1-alpha)*Y from F(0) = Y.
ClassScores lgc_iterate(const NormalizedOperator& s, const RowMatrix& y,
                        const LgcParams& params);

// Dense solve of (I - alpha S) F = (1-alpha) Y; guarded by dense_guard.
ClassScores lgc_closed(const NormalizedOperator& s, const RowMatrix& y,
                       const LgcParams& params);

// Runs the diffusion with Y replaced by the n x l matrix that is identity on
// labeled rows; returns only the labeled rows of the fixed point.
PropagationSubmatrix propagation_submatrix(const NormalizedOperator& s,
                                           const std::vector<int>& labeled_indices,
                                           const LgcParams& params);

void save_submatrix(const PropagationSubmatrix& p, const std::string& path);
PropagationSubmatrix load_submatrix(const std::string& path);

}  // namespace lgclvo
