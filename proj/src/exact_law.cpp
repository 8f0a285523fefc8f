#include "pag/exact_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "pag/kernels.hpp"

namespace pag {

namespace {

// Entries below this are trimmed from DP row tails; rows are renormalized so
// the truncation never accumulates.
constexpr double kTailCut = 1e-18;

// Non-linear closed forms fall back on quadratic-size moment tables; keep the
// table sizes sane.
constexpr uint32_t kGeneralMeanLimit = 4096;

std::vector<double> f_table(const AttachmentFunction& f, uint32_t maxdeg) {
    std::vector<double> tab(static_cast<size_t>(maxdeg) + 1);
    for (uint32_t m = 0; m <= maxdeg; ++m) tab[m] = f(m);
    return tab;
}

void trim_and_renormalize(std::vector<double>& row) {
    size_t len = row.size();
    while (len > 1 && row[len - 1] < kTailCut) --len;
    row.resize(len);
    double sum = 0.0;
    for (double v : row) sum += v;
    if (sum > 0.0 && sum != 1.0) {
        const double scale = 1.0 / sum;
        for (double& v : row) v *= scale;
    }
}

// Advances `row` (a distribution over absolute indegree, index 0 upward) from
// time t_from to t_to; calls visit(t, row) for each t > t_from if non-null.
void walk_rows(const std::vector<double>& ftab, std::vector<double>& row, uint32_t t_from,
               uint32_t t_to, const std::function<void(uint32_t, const std::vector<double>&)>* visit) {
    const kernels::Kernels& K = kernels::active();
    std::vector<double> next;
    for (uint32_t t = t_from; t < t_to; ++t) {
        const double inv = 1.0 / static_cast<double>(t);
        row.push_back(0.0);
        next.assign(row.size(), 0.0);
        K.dp_row_update(row.data(), next.data(), ftab.data(), inv, row.size());
        trim_and_renormalize(next);
        row.swap(next);
        if (visit) (*visit)(t + 1, row);
    }
}

double expectation_f(const std::vector<double>& ftab, const std::vector<double>& row) {
    double s = 0.0;
    for (size_t m = 0; m < row.size(); ++m) s += ftab[m] * row[m];
    return s;
}

// p_{m,0} and the running mean in one pass for linear f. Uses the power-sum
// expansion log p_{m,0} = -sum_p (a_m^p / p) B_p(m) with B_p(m) = sum_{r<m}
// g(r)^{-p}, falling back to a direct log1p loop for small m or slow decay.
double linear_mean_scan(const AttachmentFunction& f, uint32_t n,
                        const std::function<void(uint32_t, double)>& emit_p0) {
    const double gamma = f.gamma();
    const double f0 = f(0);
    if (emit_p0) emit_p0(1, 1.0);
    double mu = 1.0;  // mu_1
    if (n == 1) return mu;

    // b stores 1/g(r); power sums B_p cover r < current m once updated.
    std::vector<double> b;
    b.reserve(n);
    b.push_back(1.0);  // r = 1, g(1) = 1
    uint32_t jmax = 0;  // decided once m passes the direct-loop region
    double athresh = 0.0;
    std::vector<double> powsum;

    double g_prev = 1.0;  // g(m-1), maintained incrementally
    for (uint32_t m = 2; m <= n; ++m) {
        // g(m-1) = g(m-2) * (1 + gamma/(m-2)) for m >= 3.
        if (m >= 3) g_prev *= 1.0 + gamma / static_cast<double>(m - 2);
        const double a = f0 * g_prev / static_cast<double>(m - 1);

        if (jmax == 0 && m > 256) {
            // a_m decreases in m, so the value at the first series-eligible m
            // bounds everything after it.
            double lna = std::log(std::min(a, 0.999999));
            jmax = static_cast<uint32_t>(std::clamp(std::ceil(-50.7 / lna), 16.0, 512.0));
            athresh = std::exp(-50.7 / static_cast<double>(jmax));
            powsum.assign(jmax + 1, 0.0);
            for (double br : b) {
                double bb = br;
                for (uint32_t p = 1; p <= jmax; ++p) {
                    powsum[p] += bb;
                    bb *= br;
                }
            }
        } else if (jmax != 0) {
            const double br = b.back();
            double bb = br;
            for (uint32_t p = 1; p <= jmax; ++p) {
                powsum[p] += bb;
                bb *= br;
            }
        }

        double logp0;
        if (jmax == 0 || a > athresh) {
            logp0 = 0.0;
            for (uint32_t r = 1; r < m; ++r) logp0 += std::log1p(-a * b[r - 1]);
        } else {
            logp0 = 0.0;
            double ap = a;
            for (uint32_t p = 1; p <= jmax; ++p) {
                logp0 -= ap / static_cast<double>(p) * powsum[p];
                if (ap * powsum[p] < 1e-20) break;
                ap *= a;
            }
        }
        const double p0 = std::exp(logp0);
        if (emit_p0) emit_p0(m, p0);
        mu = (1.0 - f0 / static_cast<double>(m - 1)) * mu + p0;

        // b_m = 1/g(m), for the next iterations.
        const double g_m = g_prev * (1.0 + gamma / static_cast<double>(m - 1));
        b.push_back(1.0 / g_m);
    }
    return mu;
}

// Same contract for general f: builds E[f(indeg_t(r))] rows via the DP.
double general_mean_scan(const AttachmentFunction& f, uint32_t n,
                         const std::function<void(uint32_t, double)>& emit_p0) {
    if (n > kGeneralMeanLimit) {
        throw std::invalid_argument("exact mean for non-linear f is limited to n <= " +
                                    std::to_string(kGeneralMeanLimit));
    }
    if (emit_p0) emit_p0(1, 1.0);
    double mu = 1.0;
    if (n == 1) return mu;

    // mu_val[r-1][t-r] = E[f(indeg_t(r))] for t = r..n-1.
    std::vector<std::vector<double>> mu_val(n >= 2 ? n - 1 : 0);
    const std::vector<double> ftab = f_table(f, n + 1);
    for (uint32_t r = 1; r + 1 <= n; ++r) {
        auto& dst = mu_val[r - 1];
        dst.reserve(n - r);
        std::vector<double> row{1.0};
        dst.push_back(ftab[0]);
        std::function<void(uint32_t, const std::vector<double>&)> visit =
            [&](uint32_t, const std::vector<double>& rw) { dst.push_back(expectation_f(ftab, rw)); };
        walk_rows(ftab, row, r, n - 1, &visit);
    }

    const double f0 = ftab[0];
    for (uint32_t m = 2; m <= n; ++m) {
        double logp0 = 0.0;
        const double inv = 1.0 / static_cast<double>(m - 1);
        for (uint32_t r = 1; r < m; ++r) logp0 += std::log1p(-mu_val[r - 1][m - 1 - r] * inv);
        const double p0 = std::exp(logp0);
        if (emit_p0) emit_p0(m, p0);
        mu = (1.0 - f0 * inv) * mu + p0;
    }
    return mu;
}

void require_vertex_range(uint32_t i, uint32_t n, const char* who) {
    if (i == 0 || n == 0 || i > n) {
        throw std::invalid_argument(std::string(who) + " requires 1 <= i <= n");
    }
}

}  // namespace

void indegree_dp_walk(const AttachmentFunction& f, uint32_t start_time, uint32_t start_degree,
                      uint32_t n, const std::function<void(uint32_t, const std::vector<double>&)>& visit) {
    if (start_time == 0 || n < start_time) {
        throw std::invalid_argument("indegree_dp_walk requires 1 <= start_time <= n");
    }
    const std::vector<double> ftab = f_table(f, start_degree + (n - start_time) + 1);
    std::vector<double> row(static_cast<size_t>(start_degree) + 1, 0.0);
    row[start_degree] = 1.0;
    visit(start_time, row);
    walk_rows(ftab, row, start_time, n, &visit);
}

IndegreeLawTable indegree_law(const AttachmentFunction& f, uint32_t i, uint32_t n) {
    require_vertex_range(i, n, "indegree_law");
    IndegreeLawTable table;
    table.vertex = i;
    table.horizon = n;
    table.law.reserve(n - i + 1);
    indegree_dp_walk(f, i, 0, n,
                     [&](uint32_t, const std::vector<double>& row) { table.law.push_back(row); });
    return table;
}

double expected_f_degree_dp(const AttachmentFunction& f, uint32_t i, uint32_t n) {
    require_vertex_range(i, n, "expected_f_degree");
    const std::vector<double> ftab = f_table(f, (n - i) + 1);
    std::vector<double> row{1.0};
    walk_rows(ftab, row, i, n, nullptr);
    return expectation_f(ftab, row);
}

double expected_f_degree(const AttachmentFunction& f, uint32_t i, uint32_t n) {
    require_vertex_range(i, n, "expected_f_degree");
    if (!f.is_linear()) return expected_f_degree_dp(f, i, n);
    const double gamma = f.gamma();
    double prod = f(0);
    for (uint32_t j = i; j < n; ++j) prod *= 1.0 + gamma / static_cast<double>(j);
    return prod;
}

ConditionalMoments conditional_moments(const AttachmentFunction& f, uint32_t ell, uint32_t i, uint32_t n) {
    if (ell == 0 || ell >= i || i > n) {
        throw std::invalid_argument("conditional_moments requires 1 <= ell < i <= n");
    }
    ConditionalMoments out;
    out.ell = ell;
    out.cond_vertex = i;
    out.start_time = ell;
    const uint32_t count = n - ell + 1;
    out.mu_tilde.resize(count);
    out.mu_hat.resize(count);
    out.mu_plain.resize(count);

    // Wide enough for both the DP rows (degree <= n - ell) and the padded
    // backward-weight rows.
    const std::vector<double> ftab = f_table(f, 2 * (n - ell) + 3);

    // Unconditional rows for t = ell..i-1, kept for the backward pass.
    std::vector<std::vector<double>> rows;
    rows.reserve(i - ell);
    indegree_dp_walk(f, ell, 0, i - 1,
                     [&](uint32_t, const std::vector<double>& row) { rows.push_back(row); });
    for (uint32_t t = ell; t < i; ++t) out.mu_plain[t - ell] = expectation_f(ftab, rows[t - ell]);

    // Backward survival weights h[t][m] = P(i does not connect to ell |
    // indeg_t(ell) = m), seeded at t = i-1 and averaged back one step at a
    // time. Rows carry enough headroom for the m+1 lookups.
    const size_t hwidth = rows.back().size() + static_cast<size_t>(i - ell) + 1;
    std::vector<double> h(hwidth), hprev(hwidth);
    const double inv_sel = 1.0 / static_cast<double>(i - 1);
    for (size_t m = 0; m < hwidth; ++m) h[m] = 1.0 - ftab[m] * inv_sel;
    auto weigh = [&](uint32_t t, const std::vector<double>& w) {
        const std::vector<double>& pi = rows[t - ell];
        double z = 0.0, zf = 0.0, zc = 0.0, zcf = 0.0;
        for (size_t m = 0; m < pi.size(); ++m) {
            const double keep = pi[m] * w[m];
            const double cut = pi[m] * (1.0 - w[m]);
            z += keep;
            zf += keep * ftab[m];
            zc += cut;
            zcf += cut * ftab[m];
        }
        out.mu_tilde[t - ell] = zf / z;
        out.mu_hat[t - ell] = zc > 0.0 ? zcf / zc : ftab[0];
        if (t == i - 1) out.prob_no_edge = z;
    };
    weigh(i - 1, h);
    for (uint32_t t = i - 1; t-- > ell;) {
        hprev.swap(h);
        const double inv = 1.0 / static_cast<double>(t);
        for (size_t m = 0; m + 1 < hwidth; ++m) {
            const double step = ftab[m] * inv;
            h[m] = step * hprev[m + 1] + (1.0 - step) * hprev[m];
        }
        h[hwidth - 1] = hprev[hwidth - 1];
        weigh(t, h);
    }

    // Step-i split of the time-(i-1) law, then plain forward sweeps.
    const std::vector<double>& base = rows.back();
    std::vector<double> tilde(base.size()), hat(base.size() + 1, 0.0);
    for (size_t m = 0; m < base.size(); ++m) {
        const double step = ftab[m] * inv_sel;
        tilde[m] = base[m] * (1.0 - step);
        hat[m + 1] = base[m] * step;
    }
    trim_and_renormalize(tilde);
    trim_and_renormalize(hat);
    std::vector<double> plain = base;

    out.mu_tilde[i - ell] = expectation_f(ftab, tilde);
    out.mu_hat[i - ell] = expectation_f(ftab, hat);
    std::function<void(uint32_t, const std::vector<double>&)> rec_tilde =
        [&](uint32_t t, const std::vector<double>& row) { out.mu_tilde[t - ell] = expectation_f(ftab, row); };
    std::function<void(uint32_t, const std::vector<double>&)> rec_hat =
        [&](uint32_t t, const std::vector<double>& row) { out.mu_hat[t - ell] = expectation_f(ftab, row); };
    std::function<void(uint32_t, const std::vector<double>&)> rec_plain =
        [&](uint32_t t, const std::vector<double>& row) {
            if (t >= i) out.mu_plain[t - ell] = expectation_f(ftab, row);
        };
    walk_rows(ftab, tilde, i, n, &rec_tilde);
    walk_rows(ftab, hat, i, n, &rec_hat);
    walk_rows(ftab, plain, i - 1, n, &rec_plain);
    return out;
}

double prob_indegree_zero(const AttachmentFunction& f, uint32_t i, uint32_t n) {
    require_vertex_range(i, n, "prob_indegree_zero");
    const double f0 = f(0);
    double logp = 0.0;
    for (uint32_t l = i + 1; l <= n; ++l) {
        logp += std::log1p(-f0 / static_cast<double>(l - 1));
    }
    return std::exp(logp);
}

double outdegree_zero_prob(const AttachmentFunction& f, uint32_t j) {
    if (j == 0) throw std::invalid_argument("outdegree_zero_prob requires j >= 1");
    if (j == 1) return 1.0;
    double result = 0.0;
    auto grab = [&](uint32_t m, double p0) {
        if (m == j) result = p0;
    };
    if (f.is_linear()) {
        linear_mean_scan(f, j, grab);
    } else {
        general_mean_scan(f, j, grab);
    }
    return result;
}

double isolation_prob(const AttachmentFunction& f, uint32_t i, uint32_t n) {
    require_vertex_range(i, n, "isolation_prob");
    return prob_indegree_zero(f, i, n) * outdegree_zero_prob(f, i);
}

double exact_mean_isolated(const AttachmentFunction& f, uint32_t n) {
    if (n == 0) throw std::invalid_argument("exact_mean_isolated requires n >= 1");
    return f.is_linear() ? linear_mean_scan(f, n, nullptr) : general_mean_scan(f, n, nullptr);
}

LimitIndegreeDist limit_indegree_dist(const AttachmentFunction& f, uint32_t kmax) {
    LimitIndegreeDist out;
    out.pmf.resize(static_cast<size_t>(kmax) + 1);
    double prod = 1.0;  // prod_{i<k} f(i)/(1+f(i))
    double mass = 0.0;
    for (uint32_t k = 0; k <= kmax; ++k) {
        const double fk = f(k);
        out.pmf[k] = prod / (1.0 + fk);
        mass += out.pmf[k];
        prod *= fk / (1.0 + fk);
    }
    out.tail_mass = std::max(0.0, 1.0 - mass);
    return out;
}

LinearMomentCache::LinearMomentCache(const AttachmentFunction& f, uint32_t n) : n_(n) {
    if (!f.is_linear()) {
        throw std::invalid_argument("LinearMomentCache requires a linear attachment function");
    }
    if (n == 0) throw std::invalid_argument("LinearMomentCache requires n >= 1");
    gamma_ = f.gamma();
    eta_ = f(0);
    g_.assign(static_cast<size_t>(n) + 1, 1.0);
    g2_.assign(static_cast<size_t>(n) + 1, 1.0);
    h_.assign(static_cast<size_t>(n) + 1, 0.0);
    for (uint32_t u = 1; u < n; ++u) {
        g_[u + 1] = g_[u] * (1.0 + gamma_ / static_cast<double>(u));
        g2_[u + 1] = g2_[u] * (1.0 + 2.0 * gamma_ / static_cast<double>(u));
    }
    for (uint32_t t = 2; t <= n; ++t) {
        h_[t] = h_[t - 1] + g_[t - 1] / (static_cast<double>(t - 1) * g2_[t]);
    }
}

double LinearMomentCache::mu(uint32_t ell, uint32_t t) const {
    return eta_ * g_[t] / g_[ell];
}

double LinearMomentCache::f_square(uint32_t ell, uint32_t t) const {
    // Variation of constants on s_{t+1} = (1 + 2 gamma/t) s_t + (gamma^2/t) mu_t.
    return g2_[t] * (eta_ * eta_ / g2_[ell] +
                     gamma_ * gamma_ * eta_ * (h_[t] - h_[ell]) / g_[ell]);
}

double LinearMomentCache::ratio_pre(uint32_t ell, uint32_t i, uint32_t t) const {
    const double inv = 1.0 / static_cast<double>(i - 1);
    const double c = g_[i - 1] / g_[t];
    const double m = mu(ell, t);
    const double s = f_square(ell, t);
    const double tilde = (m - c * s * inv) / (1.0 - c * m * inv);
    return tilde / m;
}

double LinearMomentCache::ratio_post(uint32_t ell, uint32_t i) const {
    const double inv = 1.0 / static_cast<double>(i - 1);
    const double m_prev = mu(ell, i - 1);
    const double s_prev = f_square(ell, i - 1);
    const double tilde_i = (m_prev - s_prev * inv) / (1.0 - m_prev * inv);
    const double m_i = (1.0 + gamma_ * inv) * m_prev;
    return tilde_i / m_i;
}

IsolationTable::IsolationTable(const AttachmentFunction& f, uint32_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("IsolationTable requires n >= 1");
    theta_.assign(static_cast<size_t>(n) + 1, 0.0);

    std::vector<double> p0(static_cast<size_t>(n) + 1, 0.0);
    auto grab = [&](uint32_t m, double v) { p0[m] = v; };
    mu_n_ = f.is_linear() ? linear_mean_scan(f, n, grab) : general_mean_scan(f, n, grab);

    // P(indeg_n(i) = 0) via prefix log sums. The t = 2 factor (1 - f(0)/1)
    // vanishes when f(0) = 1 and only enters vertex 1's product, so it is
    // kept out of the prefix to avoid an ill-defined inf - inf.
    const double f0 = f(0);
    std::vector<double> logs(static_cast<size_t>(n) + 1, 0.0);
    for (uint32_t t = 3; t <= n; ++t) {
        logs[t] = logs[t - 1] + std::log1p(-f0 / static_cast<double>(t - 1));
    }
    for (uint32_t i = 2; i <= n; ++i) {
        theta_[i] = std::exp(logs[n] - logs[i]) * p0[i];
    }
    theta_[1] = n >= 2 ? (1.0 - f0) * std::exp(logs[n] - logs[2]) * p0[1] : p0[1];

    cum_.resize(n);
    double total = 0.0;
    for (uint32_t i = 1; i <= n; ++i) {
        total += theta_[i];
        cum_[i - 1] = total;
    }
    if (total <= 0.0) {
        throw std::domain_error("IsolationTable: all isolation probabilities are zero");
    }
    for (double& c : cum_) c /= total;
    cum_.back() = 1.0;
}

uint32_t IsolationTable::sample_index(Rng& rng) const {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    const size_t idx = static_cast<size_t>(it - cum_.begin());
    return static_cast<uint32_t>(std::min(idx, cum_.size() - 1) + 1);
}

}  // namespace pag
