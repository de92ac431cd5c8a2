#pragma once

#include "lgclvo/lvo_filter.hpp"

namespace lgclvo {

// Dense gradient operator A = P^T Lsym P + mu (P - I)^2 of the label-
// diagnosis cost; built once and reused across removal steps.
struct LdstOperator {
  RowMatrix a;  // n x n, symmetric
  double mu = 0.0;
};

// Dense (1-alpha)(I - alpha S)^{-1}; refuses beyond the dense guard.
RowMatrix full_propagation(const NormalizedOperator& s, const LgcParams& params);

LdstOperator build_ldst_operator(const NormalizedOperator& s, const LgcParams& params);

// Q = A Y.
RowMatrix ldst_gradient(const LdstOperator& op, const RowMatrix& y);

// After zeroing row i of Y (previously labeled with class j), subtract
// column i of A from column j of Q.
void ldst_gradient_downdate(const LdstOperator& op, RowMatrix& q, int i, int j);

struct LdstSelection {
  int instance = 0;
  int gradient_class = 0;  // the j with the most negative Q; suggested class
  int label_class = 0;     // the class the instance currently holds
  double q_value = 0.0;
};

// Removal-only rule: minimize Q_ij over active labeled i whose current
// label class differs from j -- the most negative gradient at a non-held
// class marks the label with the strongest pull toward another class.
// Ties go to the lowest indices.
LdstSelection select_removal_adapted(const RowMatrix& q, const RowMatrix& y,
                                     const std::vector<bool>& active);

FilterResult run_ldst_filter(const NormalizedOperator& s, const RowMatrix& y,
                             const std::vector<int>& labeled_indices,
                             const LgcParams& params, const StoppingRule& rule);

}  // namespace lgclvo
