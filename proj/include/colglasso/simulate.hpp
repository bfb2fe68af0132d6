#pragma once

#include "colglasso/types.hpp"

#include <cstdint>

namespace colglasso {

struct SimSpec {
    enum class Family { Star, Cycle, Grid };
    Family family = Family::Star;
    int p = 10;  // vertex count for star/cycle; grid uses side q (p = q*q)
    int q = 3;
    int n = 250;
    std::uint64_t seed = 1;
};

struct TrueModel {
    Eigen::MatrixXd theta;
    ColoredGraph graph;
};

// Hub at the last vertex: diag 1 on the leaves, 2 at the hub, 0.25 spokes.
// Two vertex classes, one edge class.
TrueModel star_precision(int p);

// Diagonal 1 / 1.5 by parity, consecutive edges 0.5 / 0.3 by the parity of
// the larger endpoint, closure edge (1,p) valued by the parity of p.
// Two vertex classes, up to two edge classes.
TrueModel cycle_precision(int p);

// q x q lattice, row-major numbering: diag 3 / 5 by parity, 0.8 on every
// lattice edge. Two vertex classes, one edge class.
TrueModel grid_precision(int q);

TrueModel make_true_model(const SimSpec& spec);

// Standard normal quantile (Wichura's AS 241, double precision).
double normal_quantile(double u);

// n i.i.d. rows from N(0, theta^{-1}) via the Cholesky factor of theta and
// a seeded mt19937_64 with the inverse-CDF normal transform; the returned
// matrix is column centered.
DataMatrix sample_mvn(const Eigen::MatrixXd& theta, int n, std::uint64_t seed);

}  // namespace colglasso
