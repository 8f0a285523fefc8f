#include "pag/stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pag/exact_law.hpp"
#include "pag/graph.hpp"
#include "pag/inv_normal.hpp"
#include "pag/kernels.hpp"
#include "pag/parallel.hpp"
#include "pag/rng.hpp"
#include "pag/size_bias.hpp"

namespace pag {

namespace {

constexpr uint64_t kStreamInner = 0x696e6e;     // inner coupling draws
constexpr uint64_t kStreamMoments = 0x6d6f6d;   // independent moment run
constexpr uint32_t kDegreeKmax = 200;

McReport moments_from_slots(const std::vector<uint32_t>& ws, uint32_t n, uint64_t seed) {
    McReport rep;
    rep.n = n;
    rep.reps = ws.size();
    rep.seed = seed;
    uint64_t sum = 0, sumsq = 0;
    for (uint32_t w : ws) {
        sum += w;
        sumsq += static_cast<uint64_t>(w) * w;
        ++rep.w_histogram[w];
    }
    const double m = static_cast<double>(ws.size());
    rep.mean = static_cast<double>(sum) / m;
    if (ws.size() > 1) {
        rep.variance = (static_cast<double>(sumsq) - m * rep.mean * rep.mean) / (m - 1.0);
        rep.variance = std::max(0.0, rep.variance);
    }
    rep.mean_ci_halfwidth = 1.96 * std::sqrt(rep.variance / m);
    return rep;
}

// Sorted standardized sample reconstructed from the histogram.
std::vector<double> standardized_sample(const McReport& rep) {
    if (rep.variance <= 0.0) {
        throw std::domain_error("standardized_sample: degenerate sample (zero variance)");
    }
    const double sd = std::sqrt(rep.variance);
    std::vector<double> xs;
    xs.reserve(rep.reps);
    for (const auto& [w, count] : rep.w_histogram) {
        const double x = (static_cast<double>(w) - rep.mean) / sd;
        xs.insert(xs.end(), count, x);
    }
    return xs;
}

double poisson_tv(const std::map<uint32_t, uint64_t>& hist, uint64_t total, double lambda,
                  uint32_t kmax) {
    // pmf by upward recurrence; both sides keep an explicit tail bucket.
    std::vector<double> pmf(kmax + 1);
    pmf[0] = std::exp(-lambda);
    for (uint32_t k = 1; k <= kmax; ++k) pmf[k] = pmf[k - 1] * lambda / k;
    double mass = 0.0;
    for (double p : pmf) mass += p;

    double l1 = 0.0, emp_mass = 0.0;
    const double inv = 1.0 / static_cast<double>(total);
    for (uint32_t k = 0; k <= kmax; ++k) {
        auto it = hist.find(k);
        const double emp = it == hist.end() ? 0.0 : static_cast<double>(it->second) * inv;
        emp_mass += emp;
        l1 += std::abs(emp - pmf[k]);
    }
    return 0.5 * (l1 + std::abs((1.0 - emp_mass) - (1.0 - mass)));
}

}  // namespace

McReport simulate_moments(const AttachmentFunction& f, uint32_t n, uint64_t reps, uint64_t seed,
                          uint32_t threads, GenVariant variant) {
    if (n == 0 || reps < 2) throw std::invalid_argument("simulate_moments requires n >= 1, reps >= 2");
    std::vector<uint32_t> ws(reps);
    parallel_for(reps, threads, [&](uint64_t r) {
        const uint64_t s = mix_seed(seed, r);
        const Graph g = variant == GenVariant::Naive ? generate_naive(f, n, s)
                                                     : generate_grouped(f, n, s);
        ws[r] = isolated_count(g);
    });
    return moments_from_slots(ws, n, seed);
}

double empirical_wasserstein_to_normal(const std::vector<double>& standardized) {
    const size_t m = standardized.size();
    if (m < 100) {
        throw std::invalid_argument("empirical_wasserstein_to_normal requires at least 100 samples");
    }
    std::vector<double> xs(standardized);
    for (double x : xs) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("empirical_wasserstein_to_normal: non-finite sample");
        }
    }
    std::sort(xs.begin(), xs.end());
    std::vector<double> q(m);
    const double inv = 1.0 / static_cast<double>(m);
    for (size_t i = 0; i < m; ++i) {
        q[i] = inv_normal_cdf((static_cast<double>(i) + 0.5) * inv);
    }
    return kernels::active().abs_diff_sum(xs.data(), q.data(), m) * inv;
}

SteinBoundReport stein_bound_terms(const AttachmentFunction& f, uint32_t n, uint64_t outer_reps,
                                   uint64_t inner_reps, uint64_t seed, uint32_t threads,
                                   SteinBoundRaw* raw) {
    if (outer_reps < 30 || inner_reps < 10) {
        throw std::invalid_argument("stein_bound_terms requires outer_reps >= 30, inner_reps >= 10");
    }
    const CouplingContext ctx(f, n);

    std::vector<uint32_t> w(outer_reps);
    std::vector<double> d_mean(outer_reps), d_within(outer_reps), d2_mean(outer_reps);
    parallel_for(outer_reps, threads, [&](uint64_t r) {
        const uint64_t rep_seed = mix_seed(seed, r);
        const Graph g = generate_grouped(f, n, mix_seed(rep_seed, kStreamGen));
        w[r] = isolated_count(g);
        const uint64_t inner_base = mix_seed(rep_seed, kStreamInner);
        double sum = 0.0, sumsq = 0.0;
        for (uint64_t j = 0; j < inner_reps; ++j) {
            const CouplingSample s = ctx.sample_given(g, mix_seed(inner_base, j));
            const double d = static_cast<double>(s.w_s) - static_cast<double>(s.w);
            sum += d;
            sumsq += d * d;
        }
        const double k = static_cast<double>(inner_reps);
        d_mean[r] = sum / k;
        d2_mean[r] = sumsq / k;
        d_within[r] = std::max(0.0, (sumsq - k * d_mean[r] * d_mean[r]) / (k - 1.0));
    });

    double mean_of_means = 0.0;
    for (double v : d_mean) mean_of_means += v;
    mean_of_means /= static_cast<double>(outer_reps);
    double between = 0.0, within = 0.0, second = 0.0;
    for (uint64_t r = 0; r < outer_reps; ++r) {
        const double c = d_mean[r] - mean_of_means;
        between += c * c;
        within += d_within[r];
        second += d2_mean[r];
    }
    between /= static_cast<double>(outer_reps - 1);
    within /= static_cast<double>(outer_reps);
    second /= static_cast<double>(outer_reps);

    SteinBoundReport rep;
    rep.n = n;
    rep.outer_reps = outer_reps;
    rep.inner_reps = inner_reps;
    rep.var_cond = std::max(0.0, between - within / static_cast<double>(inner_reps));
    rep.second_moment = second;

    const McReport mc =
        simulate_moments(f, n, 4 * outer_reps, mix_seed(seed, kStreamMoments), threads);
    if (mc.variance <= 0.0) throw std::domain_error("stein_bound_terms: degenerate W variance");
    rep.mu_hat = mc.mean;
    rep.sigma_hat = std::sqrt(mc.variance);
    rep.bound = rep.mu_hat / mc.variance * std::sqrt(2.0 / M_PI) * std::sqrt(rep.var_cond) +
                rep.mu_hat / (mc.variance * rep.sigma_hat) * rep.second_moment;

    if (outer_reps >= 100) {
        std::vector<double> xs(outer_reps);
        for (uint64_t r = 0; r < outer_reps; ++r) {
            xs[r] = (static_cast<double>(w[r]) - rep.mu_hat) / rep.sigma_hat;
        }
        rep.d_w_empirical = empirical_wasserstein_to_normal(xs);
    } else {
        rep.d_w_empirical = std::numeric_limits<double>::quiet_NaN();
    }

    if (raw) {
        raw->w = std::move(w);
        raw->d_mean = std::move(d_mean);
        raw->d_within = std::move(d_within);
        raw->d2_mean = std::move(d2_mean);
    }
    return rep;
}

RatePrediction theoretical_exponent(const AttachmentFunction& f) {
    const double gamma = f.gamma();
    RatePrediction p;
    if (std::abs(gamma - 0.5) <= 1e-12) {
        p.regime = Regime::Critical;
        p.exponent_linear = -0.5;
        p.exponent_general = -0.5;
        p.log_correction = true;
    } else if (gamma < 0.5) {
        p.regime = Regime::Sub;
        p.exponent_linear = -0.5;
        p.exponent_general = -0.5;
    } else {
        p.regime = Regime::Super;
        p.exponent_linear = gamma - 1.0;
        p.exponent_general = 4.0 * gamma - 2.5;
    }
    p.vacuous = p.exponent_general >= 0.0;
    return p;
}

RatePoint rate_point(const AttachmentFunction& f, uint32_t n, uint64_t reps, uint64_t seed,
                     uint32_t threads) {
    const McReport mc = simulate_moments(f, n, reps, seed, threads);
    RatePoint pt;
    pt.n = n;
    pt.reps = reps;
    pt.seed = seed;
    pt.d_w = empirical_wasserstein_to_normal(standardized_sample(mc));
    return pt;
}

RateFit rate_fit(const AttachmentFunction& f, const std::vector<RatePoint>& points) {
    if (points.size() < 3) throw std::invalid_argument("rate_fit requires at least three points");
    for (const RatePoint& p : points) {
        if (!(p.d_w > 0.0) || !std::isfinite(p.d_w)) {
            throw std::invalid_argument("rate_fit requires positive finite d_w values");
        }
    }
    RateFit fit;
    fit.points = points;
    const double m = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const RatePoint& p : points) {
        const double x = std::log(static_cast<double>(p.n));
        const double y = std::log(p.d_w);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = sxx - sx * sx / m;
    if (denom <= 0.0) throw std::invalid_argument("rate_fit requires distinct n values");
    fit.slope = (sxy - sx * sy / m) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    const RatePrediction pred = theoretical_exponent(f);
    fit.theoretical_exponent = f.is_linear() ? pred.exponent_linear : pred.exponent_general;
    fit.regime = pred.regime;
    return fit;
}

DegreeDistReport degree_dist_compare(const AttachmentFunction& f, uint32_t n, uint64_t reps,
                                     uint64_t seed, uint32_t threads) {
    if (n < 1000) throw std::invalid_argument("degree_dist_compare requires n >= 1000");
    if (reps == 0) throw std::invalid_argument("degree_dist_compare requires reps >= 1");

    std::vector<DegreeHistograms> hists(reps);
    std::vector<uint64_t> edge_counts(reps);
    parallel_for(reps, threads, [&](uint64_t r) {
        const Graph g = generate_grouped(f, n, mix_seed(seed, r));
        hists[r] = degree_histograms(g);
        edge_counts[r] = g.edges.size();
    });

    std::map<uint32_t, uint64_t> in_hist, out_hist;
    uint64_t edges_total = 0;
    for (uint64_t r = 0; r < reps; ++r) {
        for (const auto& [k, c] : hists[r].indegree) in_hist[k] += c;
        for (const auto& [k, c] : hists[r].outdegree) out_hist[k] += c;
        edges_total += edge_counts[r];
    }
    const uint64_t total = static_cast<uint64_t>(n) * reps;

    DegreeDistReport rep;
    rep.n = n;
    rep.reps = reps;
    rep.kmax = kDegreeKmax;
    rep.seed = seed;
    rep.lambda_hat = static_cast<double>(edges_total) / static_cast<double>(total);

    const LimitIndegreeDist limit = limit_indegree_dist(f, kDegreeKmax);
    rep.limit_mass = 1.0 - limit.tail_mass;
    double l1 = 0.0, emp_mass = 0.0;
    const double inv = 1.0 / static_cast<double>(total);
    for (uint32_t k = 0; k <= kDegreeKmax; ++k) {
        auto it = in_hist.find(k);
        const double emp = it == in_hist.end() ? 0.0 : static_cast<double>(it->second) * inv;
        emp_mass += emp;
        l1 += std::abs(emp - limit.pmf[k]);
    }
    rep.tv_indegree = 0.5 * (l1 + std::abs((1.0 - emp_mass) - limit.tail_mass));
    rep.outdegree_poisson_tv = poisson_tv(out_hist, total, rep.lambda_hat, kDegreeKmax);
    return rep;
}

}  // namespace pag
