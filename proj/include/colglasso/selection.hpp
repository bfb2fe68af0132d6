#pragma once

#include "colglasso/optimizer.hpp"
#include "colglasso/types.hpp"

namespace colglasso {

struct TuneGrid {
    enum class Mode { FullGrid, Sequential };
    std::vector<double> lambda1s, lambda2s, lambda3s, taus;
    Mode mode = Mode::FullGrid;

    void validate() const;
};

struct TuneRow {
    double lambda1, lambda2, lambda3, tau;
    double loglik = 0.0;
    int df = 0;
    double bic = 0.0;
    bool converged = false;
    bool failed = false;
    std::string error;
};

struct TuneResult {
    Hyperparams best;
    FitReport fit;
    ColoredGraphEstimate estimate;
    std::vector<TuneRow> trace;
};

struct TuningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Threshold small betas to exact zeros, single-linkage-cluster the surviving
// values with gap eps_merge (diagonals and off-diagonals separately), set
// every class to its mean, and read off the colored graph.
ColoredGraphEstimate extract_colored_estimate(const PrecisionParams& params, double eps_zero,
                                              double eps_merge);

// -2 l_c(estimate) + df log n.
double bic_c(const ColoredGraphEstimate& estimate, const GramCache& gram, int n);

// Every (lambda1, lambda2, lambda3, tau) tuple; argmin BIC with ties broken
// by smaller df, then lexicographic tuple order. `base` supplies the solver
// controls shared by all tuples.
TuneResult grid_search(const DataMatrix& data, const TuneGrid& grid, const Hyperparams& base);

// Four successive line searches (lambda1, lambda2, lambda3, tau); values not
// yet tuned sit at the smallest candidate in their list.
TuneResult sequential_search(const DataMatrix& data, const TuneGrid& grid,
                             const Hyperparams& base);

// Dispatch on grid.mode.
TuneResult tune(const DataMatrix& data, const TuneGrid& grid, const Hyperparams& base);

}  // namespace colglasso
