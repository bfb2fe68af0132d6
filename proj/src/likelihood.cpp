#include "colglasso/likelihood.hpp"

#include <cmath>

namespace colglasso {

namespace {

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

ActiveSets active_sets(const PrecisionParams& prev, double tau) {
    if (!(tau > 0)) throw std::invalid_argument("active_sets: tau must be positive");
    const auto& diag = prev.diag();
    const auto& beta = prev.beta();
    const int p = prev.p();
    const int m = static_cast<int>(beta.size());

    ActiveSets sets;
    for (int j = 0; j < p; ++j)
        for (int jp = j + 1; jp < p; ++jp)
            if (std::abs(diag[j] - diag[jp]) < tau) sets.diag_pairs.emplace_back(j, jp);
    for (int j = 0; j < m; ++j)
        if (std::abs(beta[j]) < tau) sets.beta_small.push_back(j);
    for (int j = 0; j < m; ++j)
        for (int jp = j + 1; jp < m; ++jp)
            if (std::abs(beta[j] - beta[jp]) < tau) sets.beta_pairs.emplace_back(j, jp);
    return sets;
}

AugmentedState AugmentedState::init(const ActiveSets& sets, const PrecisionParams& params,
                                    double rho, double b_init) {
    AugmentedState st;
    st.rho = rho;
    const auto& diag = params.diag();
    const auto& beta = params.beta();
    st.k.reserve(sets.diag_pairs.size());
    for (auto [j, jp] : sets.diag_pairs) st.k.push_back(diag[j] - diag[jp]);
    st.a.assign(sets.diag_pairs.size(), 0.0);
    st.b.assign(sets.diag_pairs.size(), b_init);
    st.beta_slack.reserve(sets.beta_pairs.size());
    for (auto [j, jp] : sets.beta_pairs) st.beta_slack.push_back(beta[j] - beta[jp]);
    st.c.assign(sets.beta_pairs.size(), 0.0);
    st.d.assign(sets.beta_pairs.size(), b_init);
    return st;
}

double truncated_l1(double x, double tau) {
    if (x < 0) throw std::invalid_argument("truncated_l1: negative argument");
    if (!(tau > 0)) throw std::invalid_argument("truncated_l1: tau must be positive");
    return std::min(x / tau, 1.0);
}

double composite_loglik(const PrecisionParams& params, const GramCache& gram, int n) {
    const int p = params.p();
    if (gram.p() != p) throw std::invalid_argument("composite_loglik: dimension mismatch");
    if (!(params.diag().array() > 0).all())
        throw std::invalid_argument("composite_loglik: nonpositive diagonal");
    const Eigen::MatrixXd& S = gram.S();
    const Eigen::MatrixXd theta = params.to_matrix();
    const auto& diag = params.diag();

    double total = 0.0;
    for (int j = 0; j < p; ++j) {
        Eigen::VectorXd v = theta.col(j);
        v[j] = 0.0;
        const double quad = v.dot(S * v);           // Σ_{k≠j}Σ_{l≠j} θ_kj θ_lj S_kl
        const double lin = v.dot(S.col(j));         // Σ_{i≠j} θ_ij S_ij
        total += 0.5 * (n * std::log(diag[j]) - diag[j] * S(j, j) - 2.0 * lin - quad / diag[j]);
    }
    return total;
}

double objective(const PrecisionParams& params, const GramCache& gram, int n,
                 const Hyperparams& hyper) {
    const auto& diag = params.diag();
    const auto& beta = params.beta();
    const int p = params.p();
    const int m = static_cast<int>(beta.size());

    double f = -composite_loglik(params, gram, n) / n;
    for (int j = 0; j < p; ++j)
        for (int jp = j + 1; jp < p; ++jp)
            f += hyper.lambda1 * truncated_l1(std::abs(diag[j] - diag[jp]), hyper.tau);
    for (int j = 0; j < m; ++j)
        f += hyper.lambda2 * truncated_l1(std::abs(beta[j]), hyper.tau);
    for (int j = 0; j < m; ++j)
        for (int jp = j + 1; jp < m; ++jp)
            f += hyper.lambda3 * truncated_l1(std::abs(beta[j] - beta[jp]), hyper.tau);
    return f;
}

double surrogate(const PrecisionParams& params, const GramCache& gram, int n,
                 const Hyperparams& hyper, const ActiveSets& sets) {
    const auto& diag = params.diag();
    const auto& beta = params.beta();

    double f = -composite_loglik(params, gram, n) / n;
    for (auto [j, jp] : sets.diag_pairs)
        f += hyper.lambda1 / hyper.tau * std::abs(diag[j] - diag[jp]);
    for (int j : sets.beta_small) f += hyper.lambda2 / hyper.tau * std::abs(beta[j]);
    for (auto [j, jp] : sets.beta_pairs)
        f += hyper.lambda3 / hyper.tau * std::abs(beta[j] - beta[jp]);
    return f;
}

double augmented_value(const PrecisionParams& params, const AugmentedState& state,
                       const GramCache& gram, int n, const Hyperparams& hyper,
                       const ActiveSets& sets) {
    if (state.k.size() != sets.diag_pairs.size() ||
        state.beta_slack.size() != sets.beta_pairs.size())
        throw std::invalid_argument("augmented_value: state does not match active sets");
    const auto& diag = params.diag();
    const auto& beta = params.beta();

    double f = -composite_loglik(params, gram, n) / n;
    for (std::size_t s = 0; s < sets.diag_pairs.size(); ++s)
        f += hyper.lambda1 / hyper.tau * std::abs(state.k[s]);
    for (int j : sets.beta_small) f += hyper.lambda2 / hyper.tau * std::abs(beta[j]);
    for (std::size_t s = 0; s < sets.beta_pairs.size(); ++s)
        f += hyper.lambda3 / hyper.tau * std::abs(state.beta_slack[s]);

    for (std::size_t s = 0; s < sets.diag_pairs.size(); ++s) {
        auto [j, jp] = sets.diag_pairs[s];
        const double r = diag[j] - diag[jp] - state.k[s];
        f += state.a[s] * r + 0.5 * state.b[s] * r * r;
    }
    for (std::size_t s = 0; s < sets.beta_pairs.size(); ++s) {
        auto [j, jp] = sets.beta_pairs[s];
        const double r = beta[j] - beta[jp] - state.beta_slack[s];
        f += state.c[s] * r + 0.5 * state.d[s] * r * r;
    }
    return f;
}

double grad_diag(int j, const PrecisionParams& params, const AugmentedState& state,
                 const GramCache& gram, int n, const Hyperparams& hyper,
                 const ActiveSets& sets) {
    (void)hyper;
    const auto& diag = params.diag();
    if (!(diag[j] > 0)) throw std::invalid_argument("grad_diag: nonpositive diagonal");
    const Eigen::MatrixXd& S = gram.S();
    const Eigen::MatrixXd theta = params.to_matrix();

    Eigen::VectorXd v = theta.col(j);
    v[j] = 0.0;
    const double quad = v.dot(S * v);
    double g = -quad / (2.0 * n * diag[j] * diag[j]) - 0.5 / diag[j] + S(j, j) / (2.0 * n);

    for (std::size_t s = 0; s < sets.diag_pairs.size(); ++s) {
        auto [a_idx, b_idx] = sets.diag_pairs[s];
        if (a_idx == j) {
            g += state.b[s] * diag[j] + state.a[s] -
                 state.b[s] * (diag[b_idx] + state.k[s]);
        } else if (b_idx == j) {
            g += state.b[s] * diag[j] - state.a[s] -
                 state.b[s] * (diag[a_idx] - state.k[s]);
        }
    }
    return g;
}

namespace {

// Shared likelihood part of Eqs. for ∂/∂β_j plus the multiplier terms;
// the penalized variant adds the L1 subgradient.
double grad_beta_common(int j, const PrecisionParams& params, const AugmentedState& state,
                        const GramCache& gram, int n, const ActiveSets& sets) {
    const int p = params.p();
    const auto [q, l] = pair_from_index(j, p);
    const auto& diag = params.diag();
    const Eigen::MatrixXd& S = gram.S();
    const Eigen::MatrixXd theta = params.to_matrix();

    double sum_lq = 0.0, sum_ql = 0.0;
    for (int i = 0; i < p; ++i) {
        if (i == q || i == l) continue;
        sum_lq += S(l, i) * theta(i, q);
        sum_ql += S(q, i) * theta(i, l);
    }
    double g = (S(l, l) * theta(q, l) / diag[q] + S(q, l) + sum_lq / diag[q] +
                S(q, q) * theta(q, l) / diag[l] + S(l, q) + sum_ql / diag[l]) /
               n;

    const auto& beta = params.beta();
    for (std::size_t s = 0; s < sets.beta_pairs.size(); ++s) {
        auto [a_idx, b_idx] = sets.beta_pairs[s];
        if (a_idx == j) {
            g += state.c[s] + state.d[s] * (beta[j] - beta[b_idx] - state.beta_slack[s]);
        } else if (b_idx == j) {
            g += -state.c[s] - state.d[s] * (beta[a_idx] - beta[j] - state.beta_slack[s]);
        }
    }
    return g;
}

}  // namespace

double grad_beta_penalized(int j, const PrecisionParams& params, const AugmentedState& state,
                           const GramCache& gram, int n, const Hyperparams& hyper,
                           const ActiveSets& sets) {
    return grad_beta_common(j, params, state, gram, n, sets) +
           hyper.lambda2 / hyper.tau * sign(params.beta()[j]);
}

double grad_beta_free(int j, const PrecisionParams& params, const AugmentedState& state,
                      const GramCache& gram, int n, const Hyperparams& hyper,
                      const ActiveSets& sets) {
    (void)hyper;
    return grad_beta_common(j, params, state, gram, n, sets);
}

double grad_slack_k(int slot, const PrecisionParams& params, const AugmentedState& state,
                    const Hyperparams& hyper, const ActiveSets& sets) {
    auto [j, jp] = sets.diag_pairs.at(slot);
    const auto& diag = params.diag();
    return hyper.lambda1 / hyper.tau * sign(state.k[slot]) - state.a[slot] -
           state.b[slot] * (diag[j] - diag[jp] - state.k[slot]);
}

double grad_slack_beta(int slot, const PrecisionParams& params, const AugmentedState& state,
                       const Hyperparams& hyper, const ActiveSets& sets) {
    auto [j, jp] = sets.beta_pairs.at(slot);
    const auto& beta = params.beta();
    return hyper.lambda3 / hyper.tau * sign(state.beta_slack[slot]) - state.c[slot] -
           state.d[slot] * (beta[j] - beta[jp] - state.beta_slack[slot]);
}

}  // namespace colglasso
