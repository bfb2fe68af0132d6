#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace colglasso {

// Number of off-diagonal slots of a symmetric p x p matrix.
inline int pair_count(int p) { return p * (p - 1) / 2; }

// Lexicographic index of the unordered pair (q,l), 0 <= q < l < p:
// (0,1),(0,2),...,(0,p-1),(1,2),...,(p-2,p-1) -> 0,1,...,p(p-1)/2-1.
int pair_index(int q, int l, int p);

// Inverse of pair_index.
std::pair<int, int> pair_from_index(int idx, int p);

// Table of all pairs in lexicographic order.
std::vector<std::pair<int, int>> pair_table(int p);

/// n x p observation matrix, rows are samples.
class DataMatrix {
public:
    explicit DataMatrix(Eigen::MatrixXd values, bool centered = false);

    int n() const { return static_cast<int>(values_.rows()); }
    int p() const { return static_cast<int>(values_.cols()); }
    const Eigen::MatrixXd& values() const { return values_; }
    bool centered() const { return centered_; }

private:
    Eigen::MatrixXd values_;
    bool centered_;
};

// Subtracts the column means; input is left untouched.
DataMatrix center_columns(const DataMatrix& data);

/// Gram products S = X^T X of a centered data matrix; the sufficient
/// statistics for every likelihood evaluation.
class GramCache {
public:
    explicit GramCache(Eigen::MatrixXd S);

    int p() const { return static_cast<int>(S_.rows()); }
    const Eigen::MatrixXd& S() const { return S_; }

private:
    Eigen::MatrixXd S_;
};

GramCache gram(const DataMatrix& data);

/// Precision matrix parameters: p positive diagonals plus the
/// p(p-1)/2 off-diagonals in lexicographic pair order.
class PrecisionParams {
public:
    PrecisionParams(Eigen::VectorXd diag, Eigen::VectorXd beta);

    int p() const { return static_cast<int>(diag_.size()); }
    const Eigen::VectorXd& diag() const { return diag_; }
    const Eigen::VectorXd& beta() const { return beta_; }

    // Dense symmetric view.
    Eigen::MatrixXd to_matrix() const;

    // From a symmetric matrix with positive diagonal.
    static PrecisionParams from_matrix(const Eigen::MatrixXd& theta);

private:
    Eigen::VectorXd diag_;
    Eigen::VectorXd beta_;
};

/// Tuning weights, truncation threshold and solver controls.
struct Hyperparams {
    double lambda1 = 0.0;   // diagonal-difference penalty weight
    double lambda2 = 0.0;   // off-diagonal sparsity weight
    double lambda3 = 0.0;   // off-diagonal-difference penalty weight
    double tau = 0.5;       // truncation threshold of the penalty
    double rho = 2.0;       // multiplier growth factor, > 1

    double eps_cd = 1e-7;   // coordinate-descent stop: max coordinate change
    double eps_alm = 1e-5;  // augmented-Lagrangian stop: max constraint residual
    double eps_dc = 1e-5;   // outer stop: max parameter change
    int max_cd = 500;
    int max_alm = 50;
    int max_dc = 20;

    double eps_zero = 1e-6;   // |beta| below this is a structural zero
    double eps_merge = 1e-3;  // values closer than this share a color class

    void validate() const;
};

/// Vertex and edge color classes over an undirected graph on {0..p-1}.
struct ColoredGraph {
    int p = 0;
    std::vector<std::vector<int>> vertex_classes;
    std::vector<std::pair<int, int>> edge_set;
    std::vector<std::vector<std::pair<int, int>>> edge_classes;

    void validate() const;
};

/// A fitted model after thresholding and class merging.
struct ColoredGraphEstimate {
    PrecisionParams params;
    ColoredGraph graph;
    int df = 0;
    double loglik = std::numeric_limits<double>::quiet_NaN();
    double bic = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace colglasso
