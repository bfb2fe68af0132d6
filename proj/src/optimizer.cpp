#include "colglasso/optimizer.hpp"

#include "colglasso/brent.hpp"

#include <cmath>
#include <limits>

namespace colglasso {

double soft_threshold(double z, double gamma) {
    if (gamma < 0) throw std::invalid_argument("soft_threshold: negative threshold");
    const double mag = std::abs(z) - gamma;
    if (mag <= 0) return 0.0;
    return z > 0 ? mag : -mag;
}

namespace {

constexpr double kBracketLow = 1e-10;
constexpr double kBracketCap = 1152921504606846976.0;  // 2^60
constexpr double kBrentTol = 1e-10;
constexpr double kBInit = 1.0;

// Mutable view of one surrogate problem: dense theta mirror, active-set
// adjacency, slacks and multipliers.
struct Workspace {
    const Eigen::MatrixXd& S;
    int n, p, m;
    const Hyperparams& h;
    const ActiveSets& sets;

    std::vector<std::pair<int, int>> pairs;  // beta index -> (q,l)
    struct Adj {
        int slot;    // position in sets.diag_pairs / sets.beta_pairs
        int other;   // the opposite vertex / beta index
        bool first;  // our index is the pair's first element
    };
    std::vector<std::vector<Adj>> ed_adj;  // per vertex
    std::vector<std::vector<Adj>> eo_adj;  // per beta index
    std::vector<char> in_vo;

    Eigen::VectorXd diag, beta;
    Eigen::MatrixXd theta;
    AugmentedState st;

    Workspace(const ActiveSets& sets_, const AugmentedState& state,
              const PrecisionParams& params, const GramCache& gram, int n_,
              const Hyperparams& hyper)
        : S(gram.S()),
          n(n_),
          p(params.p()),
          m(pair_count(params.p())),
          h(hyper),
          sets(sets_),
          pairs(pair_table(p)),
          ed_adj(p),
          eo_adj(m),
          in_vo(m, 0),
          diag(params.diag()),
          beta(params.beta()),
          theta(params.to_matrix()),
          st(state) {
        if (st.k.size() != sets.diag_pairs.size() ||
            st.beta_slack.size() != sets.beta_pairs.size())
            throw std::invalid_argument("optimizer: state does not match active sets");
        for (int s = 0; s < static_cast<int>(sets.diag_pairs.size()); ++s) {
            auto [j, jp] = sets.diag_pairs[s];
            ed_adj[j].push_back({s, jp, true});
            ed_adj[jp].push_back({s, j, false});
        }
        for (int s = 0; s < static_cast<int>(sets.beta_pairs.size()); ++s) {
            auto [j, jp] = sets.beta_pairs[s];
            eo_adj[j].push_back({s, jp, true});
            eo_adj[jp].push_back({s, j, false});
        }
        for (int j : sets.beta_small) in_vo[j] = 1;
    }

    PrecisionParams params() const { return PrecisionParams(diag, beta); }

    void set_diag(int j, double v) {
        diag[j] = v;
        theta(j, j) = v;
    }
    void set_beta(int j, double v) {
        beta[j] = v;
        auto [q, l] = pairs[j];
        theta(q, l) = theta(l, q) = v;
    }

    // Quadratic coefficient sum B and the linear collection C of the
    // diagonal stationarity equation; Q = Σ_{k≠j}Σ_{l≠j} θ_kj θ_lj S_kl.
    void diag_equation(int j, double& B, double& C, double& Q) const {
        Eigen::VectorXd v = theta.col(j);
        v[j] = 0.0;
        Q = v.dot(S * v);
        B = 0.0;
        C = S(j, j) / (2.0 * n);
        for (const Adj& e : ed_adj[j]) {
            B += st.b[e.slot];
            if (e.first)
                C += st.a[e.slot] - st.b[e.slot] * (diag[e.other] + st.k[e.slot]);
            else
                C += -st.a[e.slot] - st.b[e.slot] * (diag[e.other] - st.k[e.slot]);
        }
    }

    // Positive root of 2B θ³ + 2C θ² - θ - Q/n = 0. The 1-D slice of the
    // augmented objective is strictly convex on θ > 0, so the positive root
    // is unique; located by doubling the upper bracket, then Brent.
    double update_diagonal(int j) const {
        double B, C, Q;
        diag_equation(j, B, C, Q);
        const double q_over_n = Q / n;

        if (B == 0.0) {
            // no coupled pairs: S_jj θ² - n θ - Q = 0
            const double sjj = S(j, j);
            if (!(sjj > 0)) throw SolveError("update_diagonal: zero Gram diagonal");
            const double nd = static_cast<double>(n);
            return (nd + std::sqrt(nd * nd + 4.0 * sjj * Q)) / (2.0 * sjj);
        }

        auto cubic = [&](double t) { return ((2.0 * B * t + 2.0 * C) * t - 1.0) * t - q_over_n; };
        const double f_low = cubic(kBracketLow);
        if (f_low > 0.0)
            throw SolveError("update_diagonal: no positive root above bracket floor");
        if (f_low == 0.0) return kBracketLow;

        double hi = 1.0;
        while (cubic(hi) <= 0.0) {
            hi *= 2.0;
            if (hi > kBracketCap)
                throw SolveError("update_diagonal: no positive root in bracket range");
        }
        double root = brent_root(cubic, kBracketLow, hi, kBrentTol);

        // Newton polish toward an exact stationary point.
        double val = std::abs(cubic(root));
        for (int it = 0; it < 3 && val > 0.0; ++it) {
            const double deriv = (6.0 * B * root + 4.0 * C) * root - 1.0;
            if (deriv == 0.0) break;
            const double next = root - cubic(root) / deriv;
            if (!(next > 0.0)) break;
            const double nval = std::abs(cubic(next));
            if (nval >= val) break;
            root = next;
            val = nval;
        }
        return root;
    }

    double update_beta(int j) const {
        const auto [q, l] = pairs[j];
        double r = (S(l, l) / diag[q] + S(q, q) / diag[l]) / n;
        double z = -2.0 * S(q, l);
        double sum_lq = 0.0, sum_ql = 0.0;
        for (int i = 0; i < p; ++i) {
            if (i == q || i == l) continue;
            sum_lq += S(l, i) * theta(i, q);
            sum_ql += S(q, i) * theta(i, l);
        }
        z = (z - sum_lq / diag[q] - sum_ql / diag[l]) / n;
        for (const Adj& e : eo_adj[j]) {
            r += st.d[e.slot];
            if (e.first)
                z += -st.c[e.slot] + st.d[e.slot] * (beta[e.other] + st.beta_slack[e.slot]);
            else
                z += st.c[e.slot] + st.d[e.slot] * (beta[e.other] - st.beta_slack[e.slot]);
        }
        if (!(r > 0)) throw SolveError("update_beta: nonpositive curvature (degenerate Gram)");
        if (in_vo[j]) return soft_threshold(z / r, h.lambda2 / (h.tau * r));
        return z / r;
    }

    double update_slack_k(int slot) const {
        auto [j, jp] = sets.diag_pairs[slot];
        const double diff = diag[j] - diag[jp];
        return soft_threshold((st.a[slot] + st.b[slot] * diff) / st.b[slot],
                              h.lambda1 / (h.tau * st.b[slot]));
    }

    double update_slack_beta(int slot) const {
        auto [j, jp] = sets.beta_pairs[slot];
        const double diff = beta[j] - beta[jp];
        return soft_threshold((st.c[slot] + st.d[slot] * diff) / st.d[slot],
                              h.lambda3 / (h.tau * st.d[slot]));
    }

    // One full sweep in fixed order; returns the largest coordinate change.
    double sweep() {
        double delta = 0.0;
        for (int j = 0; j < p; ++j) {
            const double v = update_diagonal(j);
            delta = std::max(delta, std::abs(v - diag[j]));
            set_diag(j, v);
        }
        for (int j = 0; j < m; ++j) {
            const double v = update_beta(j);
            delta = std::max(delta, std::abs(v - beta[j]));
            set_beta(j, v);
        }
        for (int s = 0; s < static_cast<int>(sets.diag_pairs.size()); ++s) {
            const double v = update_slack_k(s);
            delta = std::max(delta, std::abs(v - st.k[s]));
            st.k[s] = v;
        }
        for (int s = 0; s < static_cast<int>(sets.beta_pairs.size()); ++s) {
            const double v = update_slack_beta(s);
            delta = std::max(delta, std::abs(v - st.beta_slack[s]));
            st.beta_slack[s] = v;
        }
        return delta;
    }

    double max_residual() const {
        double r = 0.0;
        for (int s = 0; s < static_cast<int>(sets.diag_pairs.size()); ++s) {
            auto [j, jp] = sets.diag_pairs[s];
            r = std::max(r, std::abs(diag[j] - diag[jp] - st.k[s]));
        }
        for (int s = 0; s < static_cast<int>(sets.beta_pairs.size()); ++s) {
            auto [j, jp] = sets.beta_pairs[s];
            r = std::max(r, std::abs(beta[j] - beta[jp] - st.beta_slack[s]));
        }
        return r;
    }

    void bump_multipliers() {
        for (int s = 0; s < static_cast<int>(sets.diag_pairs.size()); ++s) {
            auto [j, jp] = sets.diag_pairs[s];
            st.a[s] += st.b[s] * (diag[j] - diag[jp] - st.k[s]);
            st.b[s] *= st.rho;
        }
        for (int s = 0; s < static_cast<int>(sets.beta_pairs.size()); ++s) {
            auto [j, jp] = sets.beta_pairs[s];
            st.c[s] += st.d[s] * (beta[j] - beta[jp] - st.beta_slack[s]);
            st.d[s] *= st.rho;
        }
    }
};

}  // namespace

double update_diagonal(int j, const PrecisionParams& params, const AugmentedState& state,
                       const GramCache& gram, int n, const Hyperparams& hyper,
                       const ActiveSets& sets) {
    return Workspace(sets, state, params, gram, n, hyper).update_diagonal(j);
}

double update_beta(int j, const PrecisionParams& params, const AugmentedState& state,
                   const GramCache& gram, int n, const Hyperparams& hyper,
                   const ActiveSets& sets) {
    return Workspace(sets, state, params, gram, n, hyper).update_beta(j);
}

double update_slack_k(int slot, const PrecisionParams& params, const AugmentedState& state,
                      const Hyperparams& hyper, const ActiveSets& sets) {
    auto [j, jp] = sets.diag_pairs.at(slot);
    const double diff = params.diag()[j] - params.diag()[jp];
    return soft_threshold((state.a[slot] + state.b[slot] * diff) / state.b[slot],
                          hyper.lambda1 / (hyper.tau * state.b[slot]));
}

double update_slack_beta(int slot, const PrecisionParams& params, const AugmentedState& state,
                         const Hyperparams& hyper, const ActiveSets& sets) {
    auto [j, jp] = sets.beta_pairs.at(slot);
    const double diff = params.beta()[j] - params.beta()[jp];
    return soft_threshold((state.c[slot] + state.d[slot] * diff) / state.d[slot],
                          hyper.lambda3 / (hyper.tau * state.d[slot]));
}

AugmentedState update_multipliers(const AugmentedState& state, const PrecisionParams& params,
                                  const ActiveSets& sets) {
    AugmentedState out = state;
    const auto& diag = params.diag();
    const auto& beta = params.beta();
    for (std::size_t s = 0; s < sets.diag_pairs.size(); ++s) {
        auto [j, jp] = sets.diag_pairs[s];
        out.a[s] += out.b[s] * (diag[j] - diag[jp] - out.k[s]);
        out.b[s] *= out.rho;
    }
    for (std::size_t s = 0; s < sets.beta_pairs.size(); ++s) {
        auto [j, jp] = sets.beta_pairs[s];
        out.c[s] += out.d[s] * (beta[j] - beta[jp] - out.beta_slack[s]);
        out.d[s] *= out.rho;
    }
    return out;
}

PrecisionParams cd_solve(const ActiveSets& sets, AugmentedState& state,
                         const PrecisionParams& init, const GramCache& gram, int n,
                         const Hyperparams& hyper) {
    Workspace ws(sets, state, init, gram, n, hyper);
    for (int it = 0; it < hyper.max_cd; ++it) {
        if (ws.sweep() < hyper.eps_cd) break;
    }
    state.k = ws.st.k;
    state.beta_slack = ws.st.beta_slack;
    return ws.params();
}

AlmResult alm_solve(const ActiveSets& sets, const PrecisionParams& init, const GramCache& gram,
                    int n, const Hyperparams& hyper) {
    AugmentedState state = AugmentedState::init(sets, init, hyper.rho, kBInit);
    Workspace ws(sets, state, init, gram, n, hyper);

    AlmResult res{init, {}, 0, false, false};
    double prev = std::numeric_limits<double>::infinity();
    int non_decreasing = 0;
    for (int t = 0; t < hyper.max_alm; ++t) {
        for (int it = 0; it < hyper.max_cd; ++it) {
            if (ws.sweep() < hyper.eps_cd) break;
        }
        ++res.iterations;
        const double r = ws.max_residual();
        res.residual_trace.push_back(r);
        if (r < hyper.eps_alm) {
            res.converged = true;
            break;
        }
        non_decreasing = (r >= prev) ? non_decreasing + 1 : 0;
        prev = r;
        if (non_decreasing >= 5) {
            res.stalled = true;
            break;
        }
        ws.bump_multipliers();
    }
    res.params = ws.params();
    return res;
}

FitReport fit(const DataMatrix& data, const Hyperparams& hyper,
              const std::optional<PrecisionParams>& init) {
    hyper.validate();
    if (!data.centered()) throw std::invalid_argument("fit: data must be centered");
    const GramCache g = gram(data);
    const int n = data.n();
    const int p = data.p();
    for (int j = 0; j < p; ++j)
        if (!(g.S()(j, j) > 0))
            throw std::invalid_argument("fit: degenerate (constant) column " +
                                        std::to_string(j + 1));

    PrecisionParams params = [&] {
        if (init) {
            if (init->p() != p) throw std::invalid_argument("fit: init has wrong dimension");
            return *init;
        }
        Eigen::VectorXd diag(p);
        for (int j = 0; j < p; ++j) diag[j] = n / g.S()(j, j);
        return PrecisionParams(std::move(diag), Eigen::VectorXd::Zero(pair_count(p)));
    }();

    FitReport report{params, {objective(params, g, n, hyper)}, {}, 0, false, ""};
    PrecisionParams best = params;
    double best_obj = report.objective_trace.front();
    bool clean = true;
    std::optional<ActiveSets> prev_sets;

    for (int m = 0; m < hyper.max_dc; ++m) {
        ActiveSets sets = active_sets(params, hyper.tau);
        if (prev_sets && sets == *prev_sets) {
            report.converged = clean;
            break;
        }
        std::optional<AlmResult> alm_result;
        try {
            alm_result = alm_solve(sets, params, g, n, hyper);
        } catch (const SolveError& err) {
            report.message = err.what();
            report.params = best;
            report.converged = false;
            return report;
        }
        AlmResult& alm = *alm_result;
        ++report.dc_iterations;
        report.alm_residuals.push_back(alm.residual_trace);
        if (alm.stalled) {
            clean = false;
            report.message = "augmented-Lagrangian residuals stalled";
        } else if (!alm.converged) {
            clean = false;
            report.message = "augmented-Lagrangian iteration cap reached";
        }

        const double change =
            std::max((alm.params.diag() - params.diag()).cwiseAbs().maxCoeff(),
                     (alm.params.beta() - params.beta()).cwiseAbs().maxCoeff());
        params = alm.params;
        const double obj = objective(params, g, n, hyper);
        report.objective_trace.push_back(obj);
        if (obj < best_obj) {
            best_obj = obj;
            best = params;
        }
        if (change < hyper.eps_dc) {
            report.converged = clean;
            break;
        }
        prev_sets = std::move(sets);
    }

    report.params = params;
    return report;
}

}  // namespace colglasso
