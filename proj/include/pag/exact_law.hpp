#pragma once

// Exact (non-Monte-Carlo) laws and moments: the indegree chain DP, product
// formulas for linear f, conditional moments given a later vertex's edge
// decision, isolation probabilities, the exact mean of the isolated count,
// and the limiting indegree distribution.
//
// Conventions. Vertex i's indegree chain starts at time t=i with value 0.
// One step t -> t+1 increments with probability f(current)/t. "mu" denotes
// E[f(indeg_t(ell))], "mu_tilde"/"mu_hat" the same expectation conditioned on
// vertex i's step-i decision towards ell (no edge / edge).

#include <cstdint>
#include <functional>
#include <vector>

#include "pag/attachment.hpp"
#include "pag/rng.hpp"

namespace pag {

struct IndegreeLawTable {
    uint32_t vertex = 0;   // i
    uint32_t horizon = 0;  // n
    // law[t - vertex][m] = P(indeg_t(vertex) = m); rows renormalized, tails
    // below 1e-18 truncated.
    std::vector<std::vector<double>> law;

    const std::vector<double>& row(uint32_t t) const { return law[t - vertex]; }
};

IndegreeLawTable indegree_law(const AttachmentFunction& f, uint32_t i, uint32_t n);

// Generalized DP sweep from an arbitrary start state (used for stochastic-
// domination checks); visit(t, row) is called for every t in
// [start_time, n], row indexed by absolute indegree.
void indegree_dp_walk(const AttachmentFunction& f, uint32_t start_time, uint32_t start_degree,
                      uint32_t n, const std::function<void(uint32_t, const std::vector<double>&)>& visit);

// E[f(indeg_n(i))]: exact product f(0) * prod_{j=i}^{n-1} (1 + gamma/j) for
// linear f, DP sum otherwise.
double expected_f_degree(const AttachmentFunction& f, uint32_t i, uint32_t n);
// Always the DP path (cross-check against the product form).
double expected_f_degree_dp(const AttachmentFunction& f, uint32_t i, uint32_t n);

struct ConditionalMoments {
    uint32_t ell = 0;          // target vertex
    uint32_t cond_vertex = 0;  // i, the vertex whose step-i decision we condition on
    uint32_t start_time = 0;   // = ell; arrays are indexed by t - start_time
    std::vector<double> mu_tilde;  // E[f(indeg_t(ell)) | i did not connect to ell]
    std::vector<double> mu_hat;    // E[f(indeg_t(ell)) | i connected to ell]
    std::vector<double> mu_plain;  // E[f(indeg_t(ell))]
    double prob_no_edge = 0.0;     // P(i did not connect to ell)

    double tilde_at(uint32_t t) const { return mu_tilde[t - start_time]; }
    double hat_at(uint32_t t) const { return mu_hat[t - start_time]; }
    double plain_at(uint32_t t) const { return mu_plain[t - start_time]; }
};

// Requires ell < i <= n. For t < i the conditioning is on a future event and
// uses backward survival weights h(m,t) = P(i does not connect to ell |
// indeg_t(ell)=m); for t >= i it is a forward DP with the step-i transition
// forced.
ConditionalMoments conditional_moments(const AttachmentFunction& f, uint32_t ell, uint32_t i, uint32_t n);

// P(indeg_n(i) = 0) = prod_{l=i+1}^{n} (1 - f(0)/(l-1)), in log space.
double prob_indegree_zero(const AttachmentFunction& f, uint32_t i, uint32_t n);

// p_{j,0} = P(vertex j makes no outgoing edge) = prod_{r<j} (1 - mu_{j-1}(r)/(j-1)).
double outdegree_zero_prob(const AttachmentFunction& f, uint32_t j);

// theta_{i,n} = P(vertex i isolated in G_n) = prob_indegree_zero * p_{i,0}.
double isolation_prob(const AttachmentFunction& f, uint32_t i, uint32_t n);

// mu_n = E[W_n] by the recursion mu_1 = 1, mu_m = (1 - f(0)/(m-1)) mu_{m-1} + p_{m,0}.
// Linear f runs in O(n) via prefix power sums; other kinds build a quadratic
// moment table and are limited to n <= 4096.
double exact_mean_isolated(const AttachmentFunction& f, uint32_t n);

struct LimitIndegreeDist {
    std::vector<double> pmf;  // mu(k) for k = 0..kmax
    double tail_mass = 0.0;   // 1 - sum(pmf)
};
// mu(k) = 1/(1+f(k)) * prod_{i=0}^{k-1} f(i)/(1+f(i)).
LimitIndegreeDist limit_indegree_dist(const AttachmentFunction& f, uint32_t kmax);

// O(1) conditional-moment evaluations for linear f after an O(n) warm-up:
// closed forms for mu, E[f^2], and the thinning ratios mu_tilde/mu used by
// the coupling. Read-only after construction.
class LinearMomentCache {
  public:
    LinearMomentCache(const AttachmentFunction& f, uint32_t n);

    double mu(uint32_t ell, uint32_t t) const;        // E[f(indeg_t(ell))]
    double f_square(uint32_t ell, uint32_t t) const;  // E[f(indeg_t(ell))^2]
    // mu_tilde_t(ell, i) / mu_t(ell) for t < i (future conditioning).
    double ratio_pre(uint32_t ell, uint32_t i, uint32_t t) const;
    // The same ratio for t >= i, which is constant in t.
    double ratio_post(uint32_t ell, uint32_t i) const;
    uint32_t horizon() const { return n_; }

  private:
    uint32_t n_;
    double gamma_, eta_;
    std::vector<double> g_;   // g[t] = prod_{u=1}^{t-1} (1 + gamma/u)
    std::vector<double> g2_;  // prod_{u=1}^{t-1} (1 + 2 gamma/u)
    std::vector<double> h_;   // prefix sums for the E[f^2] closed form
};

// Exact isolation weights for one (f, n): theta_i, the exact mean, and
// inverse-CDF sampling of I with P(I=i) = theta_i / mu_n.
class IsolationTable {
  public:
    IsolationTable(const AttachmentFunction& f, uint32_t n);

    uint32_t n() const { return n_; }
    double theta(uint32_t i) const { return theta_[i]; }
    double mean() const { return mu_n_; }
    uint32_t sample_index(Rng& rng) const;

  private:
    uint32_t n_;
    double mu_n_;
    std::vector<double> theta_;  // index 1..n
    std::vector<double> cum_;    // normalized cumulative weights
};

}  // namespace pag
