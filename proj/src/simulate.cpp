#include "colglasso/simulate.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <random>

namespace colglasso {

TrueModel star_precision(int p) {
    if (p < 3) throw std::invalid_argument("star_precision: need p >= 3");
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p - 1; ++i) T(i, i) = 1.0;
    T(p - 1, p - 1) = 2.0;
    for (int i = 0; i < p - 1; ++i) T(i, p - 1) = T(p - 1, i) = 0.25;

    ColoredGraph g;
    g.p = p;
    std::vector<int> leaves(p - 1);
    for (int i = 0; i < p - 1; ++i) leaves[i] = i;
    g.vertex_classes = {leaves, {p - 1}};
    for (int i = 0; i < p - 1; ++i) g.edge_set.emplace_back(i, p - 1);
    g.edge_classes = {g.edge_set};
    g.validate();
    return {std::move(T), std::move(g)};
}

TrueModel cycle_precision(int p) {
    if (p < 3) throw std::invalid_argument("cycle_precision: need p >= 3");
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(p, p);
    // 1-based parity as printed: vertex i has diag 1 when i odd, 1.5 even.
    for (int i = 1; i <= p; ++i) T(i - 1, i - 1) = (i % 2 == 1) ? 1.0 : 1.5;

    std::vector<std::pair<int, int>> strong, weak;  // 0.5-edges, 0.3-edges
    auto put = [&](int u, int v, double val) {      // 0-based endpoints
        T(u, v) = T(v, u) = val;
        (val == 0.5 ? strong : weak).emplace_back(u, v);
    };
    for (int i = 1; i < p; ++i) {
        // edge (i, i+1): governing index i+1
        put(i - 1, i, ((i + 1) % 2 == 1) ? 0.5 : 0.3);
    }
    put(0, p - 1, (p % 2 == 1) ? 0.5 : 0.3);  // closure edge by parity of p

    ColoredGraph g;
    g.p = p;
    std::vector<int> odd, even;
    for (int i = 1; i <= p; ++i) (i % 2 == 1 ? odd : even).push_back(i - 1);
    g.vertex_classes = {odd, even};
    g.edge_set = strong;
    g.edge_set.insert(g.edge_set.end(), weak.begin(), weak.end());
    std::sort(g.edge_set.begin(), g.edge_set.end());
    if (!strong.empty()) g.edge_classes.push_back(strong);
    if (!weak.empty()) g.edge_classes.push_back(weak);
    g.validate();
    return {std::move(T), std::move(g)};
}

TrueModel grid_precision(int q) {
    if (q < 2) throw std::invalid_argument("grid_precision: need q >= 2");
    const int p = q * q;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(p, p);
    for (int i = 1; i <= p; ++i) T(i - 1, i - 1) = (i % 2 == 1) ? 3.0 : 5.0;

    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < q; ++r) {
        for (int c = 0; c < q; ++c) {
            const int i = r * q + c;
            if (c + 1 < q) edges.emplace_back(i, i + 1);
            if (r + 1 < q) edges.emplace_back(i, i + q);
        }
    }
    std::sort(edges.begin(), edges.end());
    for (auto [u, v] : edges) T(u, v) = T(v, u) = 0.8;

    ColoredGraph g;
    g.p = p;
    std::vector<int> odd, even;
    for (int i = 1; i <= p; ++i) (i % 2 == 1 ? odd : even).push_back(i - 1);
    g.vertex_classes = {odd, even};
    g.edge_set = edges;
    g.edge_classes = {edges};
    g.validate();
    return {std::move(T), std::move(g)};
}

TrueModel make_true_model(const SimSpec& spec) {
    switch (spec.family) {
        case SimSpec::Family::Star: return star_precision(spec.p);
        case SimSpec::Family::Cycle: return cycle_precision(spec.p);
        case SimSpec::Family::Grid: return grid_precision(spec.q);
    }
    throw std::invalid_argument("make_true_model: unknown family");
}

// AS 241 algorithm PPND16 (Wichura 1988), |error| < 1e-15 on (0,1).
double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("normal_quantile: argument must be in (0,1)");
    const double q = u - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    r = (q < 0) ? u : 1.0 - u;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0) ? -val : val;
}

DataMatrix sample_mvn(const Eigen::MatrixXd& theta, int n, std::uint64_t seed) {
    if (theta.rows() != theta.cols()) throw std::invalid_argument("sample_mvn: not square");
    if (n < 2) throw std::invalid_argument("sample_mvn: need n >= 2");
    const int p = static_cast<int>(theta.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(theta);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("sample_mvn: matrix not positive definite");

    std::mt19937_64 rng(seed);
    Eigen::MatrixXd Z(n, p);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < p; ++i) {
            const std::uint64_t bits = rng();
            const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
            Z(k, i) = normal_quantile(u);
        }
    }
    // theta = L L^T; rows x = L^{-T} z have covariance theta^{-1}.
    Eigen::MatrixXd X =
        llt.matrixL().transpose().solve(Z.transpose()).transpose();
    return center_columns(DataMatrix(std::move(X)));
}

}  // namespace colglasso
