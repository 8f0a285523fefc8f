#pragma once

// Exhaustive enumeration of the attachment graph law for small n: every edge
// decision is binary, so G_n has at most 2^(n(n-1)/2) outcomes and all
// functionals (isolated-count distribution, isolation probabilities, pair
// covariances, edge marginals) can be computed exactly.

#include <cstdint>
#include <functional>
#include <vector>

#include "pag/attachment.hpp"
#include "pag/graph.hpp"

namespace pag {

// Default cap: 2^15 graphs. force admits n = 7 (2^21 graphs) for callers that
// accept the wait; larger n should use the DP/product formulas.
inline constexpr uint32_t kEnumerateMaxN = 6;
inline constexpr uint32_t kEnumerateForcedMaxN = 7;

struct ExactEnumeration {
    uint32_t n = 0;
    std::vector<double> w_dist;           // P(W_n = w), index 0..n
    std::vector<double> isolation_probs;  // P(vertex i isolated), index 0 unused
    // pair_cov[i][j] = Cov(1{i isolated}, 1{j isolated}), 1-based, symmetric.
    std::vector<std::vector<double>> pair_cov;
    // edge_marginals[k][l] = P(k -> l) for k > l, 1-based, 0 elsewhere.
    std::vector<std::vector<double>> edge_marginals;
    double mean = 0.0;  // E[W_n]
};

ExactEnumeration enumerate_exact(const AttachmentFunction& f, uint32_t n, bool force = false);

// Visits every attainable graph once with its exact probability. adj_mask has
// bit (k*8 + l) set iff edge k -> l is present; iso_mask has bit i set iff
// vertex i is isolated (bit 0 unused).
void enumerate_graphs(const AttachmentFunction& f, uint32_t n,
                      const std::function<void(double prob, uint64_t adj_mask, uint32_t iso_mask)>& visit,
                      bool force = false);

// Same bit layout for a simulated graph, so samples can be binned against
// enumerate_graphs output. Requires g.n <= 7.
uint64_t edge_mask(const Graph& g);

// P(k -> ell | vertex i isolated in G_n); requires k > ell, i not in {k, ell},
// and theta_i > 0.
double conditional_edge_marginal(const AttachmentFunction& f, uint32_t n, uint32_t k, uint32_t ell,
                                 uint32_t i);

}  // namespace pag
