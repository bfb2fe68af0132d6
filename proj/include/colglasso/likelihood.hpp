#pragma once

#include "colglasso/types.hpp"

namespace colglasso {

/// Index sets below the truncation threshold at the previous iterate.
/// Only these terms stay penalized in the convex surrogate.
struct ActiveSets {
    std::vector<std::pair<int, int>> diag_pairs;  // vertex pairs (j<j'), |θ_jj-θ_j'j'| < τ
    std::vector<int> beta_small;                  // beta indices with |β_j| < τ
    std::vector<std::pair<int, int>> beta_pairs;  // beta index pairs, |β_j-β_j'| < τ

    bool operator==(const ActiveSets&) const = default;
};

ActiveSets active_sets(const PrecisionParams& prev, double tau);

/// Slack variables and Lagrange multipliers, entry i aligned with the
/// active-set pair at slot i.
struct AugmentedState {
    std::vector<double> k, a, b;           // slots over diag_pairs
    std::vector<double> beta_slack, c, d;  // slots over beta_pairs
    double rho = 2.0;

    // Slacks start at the current differences, a = c = 0, b = d = b_init.
    static AugmentedState init(const ActiveSets& sets, const PrecisionParams& params,
                               double rho, double b_init = 1.0);
};

// min(x/tau, 1); the truncated L1 penalty.
double truncated_l1(double x, double tau);

// Composite log-likelihood up to its additive constant, from Gram products.
double composite_loglik(const PrecisionParams& params, const GramCache& gram, int n);

// Penalized objective: -l_c/n plus the three truncated-L1 penalty sums.
double objective(const PrecisionParams& params, const GramCache& gram, int n,
                 const Hyperparams& hyper);

// Convex surrogate: -l_c/n plus L1 terms restricted to the active sets,
// weighted by lambda/tau.
double surrogate(const PrecisionParams& params, const GramCache& gram, int n,
                 const Hyperparams& hyper, const ActiveSets& sets);

// Surrogate with slack substitution plus the linear and quadratic
// multiplier terms.
double augmented_value(const PrecisionParams& params, const AugmentedState& state,
                       const GramCache& gram, int n, const Hyperparams& hyper,
                       const ActiveSets& sets);

// Analytic first derivatives of augmented_value. Only defined away from the
// kinks of the absolute values; the closed-form coordinate updates own the
// subgradient cases.
double grad_diag(int j, const PrecisionParams& params, const AugmentedState& state,
                 const GramCache& gram, int n, const Hyperparams& hyper,
                 const ActiveSets& sets);
double grad_beta_penalized(int j, const PrecisionParams& params, const AugmentedState& state,
                           const GramCache& gram, int n, const Hyperparams& hyper,
                           const ActiveSets& sets);
double grad_beta_free(int j, const PrecisionParams& params, const AugmentedState& state,
                      const GramCache& gram, int n, const Hyperparams& hyper,
                      const ActiveSets& sets);
double grad_slack_k(int slot, const PrecisionParams& params, const AugmentedState& state,
                    const Hyperparams& hyper, const ActiveSets& sets);
double grad_slack_beta(int slot, const PrecisionParams& params, const AugmentedState& state,
                       const Hyperparams& hyper, const ActiveSets& sets);

}  // namespace colglasso
