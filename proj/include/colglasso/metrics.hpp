#pragma once

#include "colglasso/types.hpp"

namespace colglasso {

struct F1Counts {
    int tp = 0, fp = 0, fn = 0;
    double f1 = 1.0;
};

struct MetricsReport {
    double mse = 0.0;
    F1Counts f1;
    double d0 = 0.0;
    std::vector<double> d_vertex;  // one entry per true vertex class
    std::vector<double> d_edge;    // one entry per true edge class
    double acc_all = 0.0;
};

// Squared Frobenius norm of the difference over the squared Frobenius norm
// of the truth.
double mse(const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth);

// Support recovery over the p(p-1)/2 off-diagonal slots; f1 = 1 when both
// patterns are empty.
F1Counts f1_score(const std::vector<char>& est_nonzero, const std::vector<char>& true_nonzero);

// Fraction of off-diagonal slots whose zero/nonzero status is correct.
double d0(const std::vector<char>& est_nonzero, const std::vector<char>& true_nonzero);

// Vertex-class identification: ordered pairs (j, j'), j in the true class,
// scoring tied estimates inside the class and distinct estimates outside.
// eps_merge = 0 compares exactly (the merged-estimate convention).
double d_vertex_class(const Eigen::VectorXd& est_diag, const std::vector<int>& true_class,
                      double eps_merge = 0.0);

// Edge-class counterpart over beta slots; slots thresholded to zero count
// as equal to each other.
double d_edge_class(const Eigen::VectorXd& est_beta, const std::vector<int>& true_class,
                    double eps_merge = 0.0);

// Mean of d0 and every class measure.
double acc_all(double d0_value, const std::vector<double>& d_vertex,
               const std::vector<double>& d_edge);

// All measures of a merged estimate against a true model.
MetricsReport evaluate(const PrecisionParams& est, const Eigen::MatrixXd& true_theta,
                       const ColoredGraph& true_graph, double eps_merge = 0.0);

}  // namespace colglasso
