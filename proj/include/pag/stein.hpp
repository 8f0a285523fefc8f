#pragma once

// Monte Carlo statistics for the isolated-vertex count W_n: moment
// estimation, the empirical Wasserstein distance to the standard normal, the
// size-bias variance/second-moment bound on that distance, rate fits across
// n, and degree-distribution comparisons against the exact limits.

#include <cstdint>
#include <map>
#include <vector>

#include "pag/attachment.hpp"
#include "pag/generate.hpp"

namespace pag {

struct McReport {
    uint32_t n = 0;
    uint64_t reps = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    std::map<uint32_t, uint64_t> w_histogram;
    double mean_ci_halfwidth = 0.0;  // 1.96 * sqrt(variance / reps)
    uint64_t seed = 0;
};

// One W per replication, generator seeded with mix_seed(seed, rep). Mean and
// variance come from integer sums, so results do not depend on thread count.
McReport simulate_moments(const AttachmentFunction& f, uint32_t n, uint64_t reps, uint64_t seed,
                          uint32_t threads = 1, GenVariant variant = GenVariant::Grouped);

// Mean |X_(i) - Phi^-1((i - 0.5)/m)| over the sorted standardized sample;
// requires m >= 100 and finite entries.
double empirical_wasserstein_to_normal(const std::vector<double>& standardized);

struct SteinBoundReport {
    uint32_t n = 0;
    double var_cond = 0.0;       // Var(E[W^s - W | G]), components estimator, clipped at 0
    double second_moment = 0.0;  // E[(W^s - W)^2], pooled
    double mu_hat = 0.0;
    double sigma_hat = 0.0;
    double bound = 0.0;  // mu/sigma^2 sqrt(2/pi) sqrt(var_cond) + mu/sigma^3 second_moment
    double d_w_empirical = 0.0;  // NaN when outer_reps < 100
    uint64_t outer_reps = 0;
    uint64_t inner_reps = 0;
};

// Per-replication slices, for resampling the report's uncertainty.
struct SteinBoundRaw {
    std::vector<uint32_t> w;        // W per outer graph
    std::vector<double> d_mean;     // mean of W^s - W over the inner draws
    std::vector<double> d_within;   // within-graph sample variance of W^s - W
    std::vector<double> d2_mean;    // mean of (W^s - W)^2
};

// Outer loop: graphs; inner loop: couplings on the fixed graph. mu_hat and
// sigma_hat come from an independent moment run with 4x outer_reps. Requires
// outer_reps >= 30 and inner_reps >= 10.
SteinBoundReport stein_bound_terms(const AttachmentFunction& f, uint32_t n, uint64_t outer_reps,
                                   uint64_t inner_reps, uint64_t seed, uint32_t threads = 1,
                                   SteinBoundRaw* raw = nullptr);

enum class Regime { Sub, Critical, Super };

// Predicted d_W decay exponents. The linear column applies to linear f only;
// the general column holds for any admissible f (and is weaker above the
// critical point, going vacuous once it reaches 0).
struct RatePrediction {
    Regime regime = Regime::Sub;
    double exponent_linear = 0.0;
    double exponent_general = 0.0;
    bool vacuous = false;         // exponent_general >= 0
    bool log_correction = false;  // critical case carries a log^2 n factor
};

RatePrediction theoretical_exponent(const AttachmentFunction& f);

struct RatePoint {
    uint32_t n = 0;
    double d_w = 0.0;
    uint64_t reps = 0;
    uint64_t seed = 0;
};

struct RateFit {
    std::vector<RatePoint> points;  // at least 3, distinct n
    double slope = 0.0;             // OLS on (log n, log d_w)
    double intercept = 0.0;
    // The column matching f's kind: linear for linear f, general otherwise.
    double theoretical_exponent = 0.0;
    Regime regime = Regime::Sub;
};

// d_w at one n: simulate, standardize by the sample moments, compare to the
// normal quantiles.
RatePoint rate_point(const AttachmentFunction& f, uint32_t n, uint64_t reps, uint64_t seed,
                     uint32_t threads = 1);

RateFit rate_fit(const AttachmentFunction& f, const std::vector<RatePoint>& points);

struct DegreeDistReport {
    uint32_t n = 0;
    uint64_t reps = 0;
    uint32_t kmax = 0;
    double tv_indegree = 0.0;  // pooled empirical indegree vs the exact limit
    double limit_mass = 0.0;   // limit pmf mass on 0..kmax
    double lambda_hat = 0.0;   // pooled mean outdegree
    double outdegree_poisson_tv = 0.0;  // pooled outdegree vs Poisson(lambda_hat)
    uint64_t seed = 0;
};

// Requires n >= 1000 so the limit comparison is meaningful; kmax is fixed at
// 200 with an explicit tail bucket on both sides of each TV.
DegreeDistReport degree_dist_compare(const AttachmentFunction& f, uint32_t n, uint64_t reps,
                                     uint64_t seed, uint32_t threads = 1);

}  // namespace pag
