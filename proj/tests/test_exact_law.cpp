#include <cmath>
#include <vector>

#include "doctest.h"
#include "pag/enumerate.hpp"
#include "pag/exact_law.hpp"
#include "pag/rng.hpp"

using namespace pag;

namespace {

// E[f(indeg_t(ell))] straight off the law table, for cross-checks.
double mu_from_table(const AttachmentFunction& f, uint32_t ell, uint32_t t) {
    const IndegreeLawTable table = indegree_law(f, ell, t);
    const std::vector<double>& row = table.row(t);
    double s = 0.0;
    for (std::size_t m = 0; m < row.size(); ++m) s += f(m) * row[m];
    return s;
}

AttachmentFunction linear_as_table(double gamma, double eta, uint32_t entries) {
    std::vector<double> v(entries);
    for (uint32_t k = 0; k < entries; ++k) v[k] = gamma * k + eta;
    return AttachmentFunction::table(v);
}

}  // namespace

TEST_SUITE("exact_law") {
    TEST_CASE("indegree law: frozen small case and row invariants") {
        const AttachmentFunction f = parse_spec("linear:0.5,0.5");
        const IndegreeLawTable t13 = indegree_law(f, 1, 3);
        REQUIRE(t13.law.size() == 3);
        CHECK(t13.row(1)[0] == doctest::Approx(1.0));
        CHECK(t13.row(2)[0] == doctest::Approx(0.5));
        CHECK(t13.row(2)[1] == doctest::Approx(0.5));
        CHECK(t13.row(3)[0] == doctest::Approx(0.375));
        CHECK(t13.row(3)[1] == doctest::Approx(0.375));
        CHECK(t13.row(3)[2] == doctest::Approx(0.25));

        for (const char* text : {"linear:0.5,0.5", "power:0.3,0.2,0.4"}) {
            const AttachmentFunction g = parse_spec(text);
            const IndegreeLawTable table = indegree_law(g, 3, 40);
            CHECK(table.vertex == 3);
            CHECK(table.horizon == 40);
            REQUIRE(table.law.size() == 38);
            for (uint32_t t = 3; t <= 40; ++t) {
                const auto& row = table.row(t);
                REQUIRE(!row.empty());
                CHECK(row.size() <= t - 3 + 1);  // indegree gains at most 1 per step
                double sum = 0.0;
                for (double p : row) {
                    CHECK(p >= 0.0);
                    sum += p;
                }
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("expected f-degree: product form equals DP") {
        for (const char* text : {"linear:0.5,0.5", "linear:0.3,0.5"}) {
            const AttachmentFunction f = parse_spec(text);
            for (uint32_t n : {1u, 2u, 5u, 37u, 200u}) {
                for (uint32_t i = 1; i <= n; i += (i < 5 ? 1 : 13)) {
                    const double prod = expected_f_degree(f, i, n);
                    const double dp = expected_f_degree_dp(f, i, n);
                    CHECK(prod == doctest::Approx(dp).epsilon(1e-9));
                }
            }
        }
        // Frozen: f(0) * (1 + 0.5/1) * (1 + 0.5/2).
        const AttachmentFunction lin = parse_spec("linear:0.5,0.5");
        CHECK(expected_f_degree(lin, 1, 3) == doctest::Approx(0.9375).epsilon(1e-12));
        CHECK(mu_from_table(lin, 1, 3) == doctest::Approx(0.9375).epsilon(1e-12));
    }

    TEST_CASE("conditional moments: frozen values") {
        const AttachmentFunction f = parse_spec("linear:0.5,0.5");

        // Conditioning on vertex 2's step towards vertex 1, observed at t=2.
        const ConditionalMoments m12 = conditional_moments(f, 1, 2, 2);
        CHECK(m12.prob_no_edge == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(m12.tilde_at(2) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(m12.hat_at(2) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m12.plain_at(2) == doctest::Approx(0.75).epsilon(1e-12));

        // Vertex 3's decision towards 1, observed before, at, and after i=3.
        const ConditionalMoments m13 = conditional_moments(f, 1, 3, 5);
        CHECK(m13.tilde_at(2) == doctest::Approx(0.7).epsilon(1e-10));
        CHECK(m13.hat_at(2) == doctest::Approx(0.8333333333333334).epsilon(1e-10));
        CHECK(m13.plain_at(2) == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(m13.tilde_at(3) == doctest::Approx(0.7).epsilon(1e-10));
        CHECK(m13.hat_at(3) == doctest::Approx(1.3333333333333333).epsilon(1e-10));
        CHECK(m13.tilde_at(4) == doctest::Approx(0.8166666666666667).epsilon(1e-10));
        CHECK(m13.hat_at(4) == doctest::Approx(1.5555555555555554).epsilon(1e-10));
        CHECK(m13.tilde_at(5) == doctest::Approx(0.91875).epsilon(1e-10));
        CHECK(m13.hat_at(5) == doctest::Approx(1.75).epsilon(1e-10));
        CHECK(m13.plain_at(5) == doctest::Approx(1.23046875).epsilon(1e-12));

        const AttachmentFunction pow = parse_spec("power:0.3,0.2,0.4");
        const ConditionalMoments p24 = conditional_moments(pow, 2, 4, 6);
        CHECK(p24.tilde_at(3) == doctest::Approx(0.4543307086614174).epsilon(1e-10));
        CHECK(p24.hat_at(3) == doctest::Approx(0.4913043478260869).epsilon(1e-10));
        CHECK(p24.tilde_at(6) == doctest::Approx(0.49958156353229327).epsilon(1e-10));
        CHECK(p24.hat_at(6) == doctest::Approx(0.7260365813907047).epsilon(1e-10));
        CHECK(p24.plain_at(6) == doctest::Approx(0.53430466627058304).epsilon(1e-10));
    }

    TEST_CASE("conditional moments: mixture identity, ratio bound, ordering") {
        for (const char* text : {"linear:0.5,0.5", "power:0.3,0.2,0.4"}) {
            const AttachmentFunction f = parse_spec(text);
            const double ratio_cap = f(1) / f(0);
            const uint32_t n = 40;
            for (uint32_t ell = 1; ell < n; ell += 3) {
                for (uint32_t i = ell + 1; i <= n; i += 5) {
                    const ConditionalMoments cm = conditional_moments(f, ell, i, n);
                    const double p = cm.prob_no_edge;
                    CHECK(p > 0.0);
                    CHECK(p < 1.0);
                    for (uint32_t t = ell; t <= n; ++t) {
                        const double mix = p * cm.tilde_at(t) + (1.0 - p) * cm.hat_at(t);
                        CHECK(mix == doctest::Approx(cm.plain_at(t)).epsilon(1e-9));
                        CHECK(cm.hat_at(t) <= ratio_cap * cm.plain_at(t) * (1.0 + 1e-9));
                        if (t >= i) {
                            CHECK(cm.tilde_at(t) <= cm.plain_at(t) * (1.0 + 1e-12));
                            CHECK(cm.plain_at(t) <= cm.hat_at(t) * (1.0 + 1e-12));
                        }
                    }
                }
            }
        }
    }

    TEST_CASE("stochastic domination of the f-moment in the start state") {
        // Starting the chain one indegree higher multiplies E[f] by at most
        // f(k+1)/f(k).
        for (const char* text : {"linear:0.5,0.5", "power:0.3,0.2,0.4"}) {
            const AttachmentFunction f = parse_spec(text);
            const uint32_t n = 30, start = 6;
            for (uint32_t k = 0; k <= 3; ++k) {
                std::vector<double> lo(n + 1, 0.0), hi(n + 1, 0.0);
                indegree_dp_walk(f, start, k, n, [&](uint32_t t, const std::vector<double>& row) {
                    for (std::size_t m = 0; m < row.size(); ++m) lo[t] += f(m) * row[m];
                });
                indegree_dp_walk(f, start, k + 1, n, [&](uint32_t t, const std::vector<double>& row) {
                    for (std::size_t m = 0; m < row.size(); ++m) hi[t] += f(m) * row[m];
                });
                const double cap = f(k + 1) / f(k);
                for (uint32_t t = start; t <= n; ++t) {
                    CHECK(lo[t] <= hi[t] * (1.0 + 1e-12));  // monotone in the start state
                    CHECK(hi[t] <= cap * lo[t] * (1.0 + 1e-9));
                }
            }
        }
    }

    TEST_CASE("isolation probabilities: frozen values and products") {
        const AttachmentFunction f = parse_spec("linear:0.5,0.5");
        CHECK(prob_indegree_zero(f, 3, 5) == doctest::Approx(35.0 / 48.0).epsilon(1e-12));
        CHECK(outdegree_zero_prob(f, 3) == doctest::Approx(0.46875).epsilon(1e-12));
        const double theta5[] = {0.2734375, 0.2734375, 0.341796875, 0.3968641493055555,
                                 0.4440399805704752};
        for (uint32_t i = 1; i <= 5; ++i) {
            CHECK(isolation_prob(f, i, 5) == doctest::Approx(theta5[i - 1]).epsilon(1e-10));
        }
        // P(indeg_n = 0) must match the DP's mass at zero.
        for (const char* text : {"linear:0.3,0.5", "power:0.3,0.2,0.4"}) {
            const AttachmentFunction g = parse_spec(text);
            const IndegreeLawTable table = indegree_law(g, 4, 60);
            for (uint32_t t = 4; t <= 60; t += 7) {
                CHECK(prob_indegree_zero(g, 4, t) ==
                      doctest::Approx(table.row(t)[0]).epsilon(1e-10));
            }
        }
    }

    TEST_CASE("exact mean: recursion equals enumeration and theta sums") {
        for (const char* text : {"linear:0.5,0.5", "linear:0.3,0.5", "power:0.3,0.2,0.4"}) {
            const AttachmentFunction f = parse_spec(text);
            for (uint32_t n = 1; n <= 6; ++n) {
                const double mean = exact_mean_isolated(f, n);
                double theta_sum = 0.0;
                for (uint32_t i = 1; i <= n; ++i) theta_sum += isolation_prob(f, i, n);
                CHECK(mean == doctest::Approx(theta_sum).epsilon(1e-11));
                CHECK(mean == doctest::Approx(enumerate_exact(f, n).mean).epsilon(1e-11));
            }
        }
        CHECK(exact_mean_isolated(parse_spec("linear:0.5,0.5"), 5) ==
              doctest::Approx(1.7295760048760307).epsilon(1e-12));
    }

    TEST_CASE("exact mean: linear fast path equals the general scan") {
        // A table that agrees with linear:0.5,0.5 on every reachable indegree
        // forces the general path; the two scans must agree.
        const AttachmentFunction lin = parse_spec("linear:0.5,0.5");
        const AttachmentFunction tab = linear_as_table(0.5, 0.5, 64);
        for (uint32_t n : {2u, 10u, 33u, 64u}) {
            CHECK(exact_mean_isolated(tab, n) ==
                  doctest::Approx(exact_mean_isolated(lin, n)).epsilon(1e-11));
        }
        CHECK_THROWS_AS(exact_mean_isolated(parse_spec("power:0.3,0.2,0.4"), 5000),
                        std::invalid_argument);
    }

    TEST_CASE("limit indegree distribution") {
        const AttachmentFunction f = parse_spec("linear:0.5,0.5");
        const LimitIndegreeDist d = limit_indegree_dist(f, 200);
        REQUIRE(d.pmf.size() == 201);
        CHECK(d.pmf[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(d.pmf[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
        CHECK(d.pmf[2] == doctest::Approx(0.06666666666666667).epsilon(1e-12));
        CHECK(1.0 - d.tail_mass == doctest::Approx(0.9999512266497588).epsilon(1e-12));

        // The bounded power f gives near-geometric tails: at kmax=200 the
        // remaining mass is below double rounding.
        const LimitIndegreeDist dp = limit_indegree_dist(parse_spec("power:0.3,0.2,0.4"), 200);
        CHECK(std::fabs(dp.tail_mass) < 1e-12);
        double sum = d.tail_mass;
        for (double p : d.pmf) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("linear moment cache matches the general DP machinery") {
        const AttachmentFunction f = parse_spec("linear:0.3,0.5");
        const uint32_t n = 60;
        const LinearMomentCache cache(f, n);
        for (uint32_t ell = 1; ell <= n; ell += 7) {
            for (uint32_t t = ell; t <= n; t += 5) {
                CHECK(cache.mu(ell, t) ==
                      doctest::Approx(expected_f_degree_dp(f, ell, t)).epsilon(1e-11));
                // E[f^2] against a direct DP sum.
                double fsq = 0.0;
                indegree_dp_walk(f, ell, 0, t, [&](uint32_t s, const std::vector<double>& row) {
                    if (s != t) return;
                    for (std::size_t m = 0; m < row.size(); ++m) fsq += f(m) * f(m) * row[m];
                });
                CHECK(cache.f_square(ell, t) == doctest::Approx(fsq).epsilon(1e-11));
            }
        }
        for (uint32_t ell = 1; ell < n; ell += 11) {
            for (uint32_t i = ell + 1; i <= n; i += 9) {
                const ConditionalMoments cm = conditional_moments(f, ell, i, n);
                for (uint32_t t = ell; t < i; t += 3) {
                    CHECK(cache.ratio_pre(ell, i, t) ==
                          doctest::Approx(cm.tilde_at(t) / cm.plain_at(t)).epsilon(1e-11));
                }
                CHECK(cache.ratio_post(ell, i) ==
                      doctest::Approx(cm.tilde_at(i) / cm.plain_at(i)).epsilon(1e-11));
                // Constant in t beyond i.
                if (i < n) {
                    CHECK(cache.ratio_post(ell, i) ==
                          doctest::Approx(cm.tilde_at(n) / cm.plain_at(n)).epsilon(1e-11));
                }
            }
        }
    }

    TEST_CASE("moment bound: E[f(deg)] <= (n/i)^gamma") {
        for (const char* text : {"linear:0.5,0.5", "linear:0.3,0.5", "power:0.3,0.2,0.4"}) {
            const AttachmentFunction f = parse_spec(text);
            for (uint32_t n : {10u, 100u}) {
                for (uint32_t i = 1; i <= n; i += 9) {
                    const double bound =
                        std::pow(static_cast<double>(n) / static_cast<double>(i), f.gamma());
                    CHECK(expected_f_degree(f, i, n) <= bound * (1.0 + 1e-9));
                }
            }
        }
    }

    TEST_CASE("isolation table: weights, mean, and sampling") {
        const AttachmentFunction f = parse_spec("linear:0.5,0.5");
        const uint32_t n = 30;
        const IsolationTable table(f, n);
        CHECK(table.n() == n);
        CHECK(table.mean() == doctest::Approx(exact_mean_isolated(f, n)).epsilon(1e-11));
        for (uint32_t i = 1; i <= n; i += 4) {
            CHECK(table.theta(i) == doctest::Approx(isolation_prob(f, i, n)).epsilon(1e-10));
        }
        // P(I = i) = theta_i / mu_n; compare empirical frequencies at 6 sigma.
        Rng rng(404);
        const uint64_t reps = 100000;
        std::vector<uint64_t> counts(n + 1, 0);
        for (uint64_t r = 0; r < reps; ++r) {
            const uint32_t i = table.sample_index(rng);
            REQUIRE(i >= 1);
            REQUIRE(i <= n);
            ++counts[i];
        }
        for (uint32_t i = 1; i <= n; ++i) {
            const double p = table.theta(i) / table.mean();
            const double sigma = std::sqrt(p * (1.0 - p) * reps);
            CHECK(std::fabs(counts[i] - p * reps) < 6.0 * sigma + 1.0);
        }
    }

    TEST_CASE("isolation table: boundary attachment f(0) = 1") {
        // With f identically 1: vertex 2 connects to 1 surely (theta_1 = 0)
        // and makes that edge surely (theta_2 = 0); vertices 3 and 4 keep
        // positive weight. Hand computation: theta_3 = (2/3)(1/4) = 1/6,
        // theta_4 = (2/3)^3 = 8/27.
        const AttachmentFunction f = AttachmentFunction::table({1.0});
        const uint32_t n = 4;
        const IsolationTable table(f, n);
        CHECK(table.theta(1) == doctest::Approx(0.0));
        CHECK(table.theta(2) == doctest::Approx(0.0));
        CHECK(table.theta(3) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
        CHECK(table.theta(4) == doctest::Approx(8.0 / 27.0).epsilon(1e-12));
        Rng rng(5);
        for (int j = 0; j < 200; ++j) {
            const uint32_t i = table.sample_index(rng);
            CHECK(i >= 3);
            CHECK(i <= n);
        }
    }
}
