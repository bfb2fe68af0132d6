#pragma once

#include "colglasso/likelihood.hpp"
#include "colglasso/types.hpp"

#include <optional>

namespace colglasso {

// sign(z) * (|z| - gamma)_+
double soft_threshold(double z, double gamma);

/// Raised when a coordinate update cannot make progress (degenerate data,
/// e.g. a zero column leaves the diagonal cubic without a positive root).
struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitReport {
    PrecisionParams params;
    std::vector<double> objective_trace;             // Eq.-(1) value, entry per DC iterate
    std::vector<std::vector<double>> alm_residuals;  // per DC iteration, per ALM iteration
    int dc_iterations = 0;
    bool converged = false;
    std::string message;
};

struct AlmResult {
    PrecisionParams params;
    std::vector<double> residual_trace;  // max constraint residual per ALM iteration
    int iterations = 0;
    bool converged = false;
    bool stalled = false;  // residual failed to decrease 5 times in a row
};

// Single-coordinate exact minimizers of the augmented objective, all other
// coordinates held at their current values.
double update_diagonal(int j, const PrecisionParams& params, const AugmentedState& state,
                       const GramCache& gram, int n, const Hyperparams& hyper,
                       const ActiveSets& sets);
double update_beta(int j, const PrecisionParams& params, const AugmentedState& state,
                   const GramCache& gram, int n, const Hyperparams& hyper,
                   const ActiveSets& sets);
double update_slack_k(int slot, const PrecisionParams& params, const AugmentedState& state,
                      const Hyperparams& hyper, const ActiveSets& sets);
double update_slack_beta(int slot, const PrecisionParams& params, const AugmentedState& state,
                         const Hyperparams& hyper, const ActiveSets& sets);

// a += b * residual, then b *= rho (and likewise for c, d).
AugmentedState update_multipliers(const AugmentedState& state, const PrecisionParams& params,
                                  const ActiveSets& sets);

// Full coordinate-descent sweeps (diagonals, betas, k slacks, beta slacks, in
// index order) until the largest coordinate change drops below eps_cd.
// Updates the slack entries of `state` in place.
PrecisionParams cd_solve(const ActiveSets& sets, AugmentedState& state,
                         const PrecisionParams& init, const GramCache& gram, int n,
                         const Hyperparams& hyper);

// Augmented-Lagrangian loop for one convex surrogate: alternate cd_solve and
// multiplier updates until the constraint residuals fall below eps_alm.
AlmResult alm_solve(const ActiveSets& sets, const PrecisionParams& init, const GramCache& gram,
                    int n, const Hyperparams& hyper);

// Full DC outer loop. Default start: diag = n / S_jj, beta = 0.
FitReport fit(const DataMatrix& data, const Hyperparams& hyper,
              const std::optional<PrecisionParams>& init = std::nullopt);

}  // namespace colglasso
