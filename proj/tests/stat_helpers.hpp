#pragma once

// Statistics helpers for the tests: a regularized incomplete gamma tail for
// chi-square p-values and a Pearson goodness-of-fit wrapper with small-cell
// pooling. Kept out of the library on purpose; the library never computes
// p-values.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace testutil {

// Regularized upper incomplete gamma Q(a, x): series for x < a+1, modified
// Lentz continued fraction otherwise.
inline double upper_gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::domain_error("upper_gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// P(chi2_dof > stat).
inline double chi2_sf(double stat, double dof) { return upper_gamma_q(dof / 2.0, stat / 2.0); }

// Pearson goodness-of-fit p-value. Cells whose expected count falls below
// min_expected are pooled into the running cell to keep the chi-square
// approximation honest; dof = pooled cells - 1.
inline double chi2_gof_pvalue(const std::vector<double>& probs,
                              const std::vector<uint64_t>& counts, double min_expected = 5.0) {
    if (probs.size() != counts.size()) throw std::invalid_argument("chi2_gof: size mismatch");
    uint64_t total = 0;
    for (uint64_t c : counts) total += c;
    if (total == 0) throw std::invalid_argument("chi2_gof: empty sample");

    std::vector<double> exp_pool;
    std::vector<double> obs_pool;
    double exp_acc = 0.0;
    double obs_acc = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        exp_acc += probs[j] * static_cast<double>(total);
        obs_acc += static_cast<double>(counts[j]);
        if (exp_acc >= min_expected) {
            exp_pool.push_back(exp_acc);
            obs_pool.push_back(obs_acc);
            exp_acc = 0.0;
            obs_acc = 0.0;
        }
    }
    if (exp_acc > 0.0 || obs_acc > 0.0) {
        if (exp_pool.empty()) {
            exp_pool.push_back(exp_acc);
            obs_pool.push_back(obs_acc);
        } else {
            exp_pool.back() += exp_acc;
            obs_pool.back() += obs_acc;
        }
    }
    if (exp_pool.size() < 2) return 1.0;

    double stat = 0.0;
    for (std::size_t j = 0; j < exp_pool.size(); ++j) {
        const double diff = obs_pool[j] - exp_pool[j];
        stat += diff * diff / exp_pool[j];
    }
    return chi2_sf(stat, static_cast<double>(exp_pool.size() - 1));
}

}  // namespace testutil
