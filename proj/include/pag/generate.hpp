#pragma once

// Graph generators. Both sample the same law: start from the single vertex 1,
// and at step m = 2..n connect the new vertex m to each existing k < m
// independently with probability f(indeg_{m-1}(k))/(m-1), where all of step
// m's decisions read the frozen time-(m-1) indegrees. The naive generator
// draws one Bernoulli per (m,k) pair; the grouped generator draws one
// Binomial per occupied indegree class and picks members uniformly, which
// costs O(n^{1+gamma}) instead of O(n^2).

#include <cstdint>

#include "pag/attachment.hpp"
#include "pag/graph.hpp"

namespace pag {

enum class GenVariant { Naive, Grouped };

struct GenConfig {
    uint32_t n = 1;
    uint64_t seed = 0;
    GenVariant variant = GenVariant::Grouped;
};

// Callers must have validated f for horizon >= n.
Graph generate_naive(const AttachmentFunction& f, uint32_t n, uint64_t seed);
Graph generate_grouped(const AttachmentFunction& f, uint32_t n, uint64_t seed);
Graph generate(const AttachmentFunction& f, const GenConfig& cfg);

}  // namespace pag
