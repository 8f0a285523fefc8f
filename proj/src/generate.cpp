#include "pag/generate.hpp"

#include <stdexcept>
#include <vector>

#include "pag/kernels.hpp"
#include "pag/rng.hpp"

namespace pag {

namespace {

std::vector<double> f_table(const AttachmentFunction& f, uint32_t n) {
    std::vector<double> ftab(n > 0 ? n : 1);
    for (uint32_t d = 0; d < ftab.size(); ++d) ftab[d] = f.evaluate(d);
    return ftab;
}

}  // namespace

Graph generate_naive(const AttachmentFunction& f, uint32_t n, uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate: n must be >= 1");
    Graph g = Graph::empty(n);
    if (n == 1) return g;

    Rng rng(seed);
    const std::vector<double> ftab = f_table(f, n);
    const auto& k = kernels::active();
    std::vector<double> u(n);
    std::vector<uint8_t> hits(n);

    for (uint32_t m = 2; m <= n; ++m) {
        const uint32_t count = m - 1;
        const double inv = 1.0 / static_cast<double>(count);
        for (uint32_t j = 0; j < count; ++j) u[j] = rng.next_double();
        // indegree[1..m-1] is the frozen snapshot: add_edge only touches
        // indegrees after the whole row was decided here.
        k.bernoulli_hits(u.data(), g.indegree.data() + 1, ftab.data(), inv, hits.data(), count);
        for (uint32_t dst = 1; dst < m; ++dst) {
            if (hits[dst - 1]) g.add_edge(m, dst);
        }
    }
    return g;
}

Graph generate_grouped(const AttachmentFunction& f, uint32_t n, uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate: n must be >= 1");
    Graph g = Graph::empty(n);
    if (n == 1) return g;

    Rng rng(seed);
    const std::vector<double> ftab = f_table(f, n);
    std::vector<std::vector<uint32_t>> groups(n);  // indegree class -> members
    groups[0].push_back(1);
    uint32_t maxd = 0;
    std::vector<std::pair<uint32_t, uint32_t>> moved;  // (vertex, new degree)

    for (uint32_t m = 2; m <= n; ++m) {
        const double inv = 1.0 / static_cast<double>(m - 1);
        moved.clear();
        for (uint32_t d = 0; d <= maxd; ++d) {
            auto& grp = groups[d];
            if (grp.empty()) continue;
            const uint64_t c = grp.size();
            const uint64_t x = rng.binomial(c, ftab[d] * inv);
            if (x == 0) continue;
            // Partial Fisher-Yates: a uniform x-subset lands in grp[0..x).
            for (uint64_t j = 0; j < x; ++j) {
                std::swap(grp[j], grp[j + rng.below(c - j)]);
            }
            for (uint64_t j = 0; j < x; ++j) {
                g.add_edge(m, grp[j]);
                moved.emplace_back(grp[j], d + 1);
            }
            for (uint64_t j = x; j-- > 0;) {
                grp[j] = grp.back();
                grp.pop_back();
            }
        }
        // Degree-class moves are deferred so every group in this step saw the
        // time-(m-1) classes.
        for (const auto& [v, nd] : moved) {
            groups[nd].push_back(v);
            if (nd > maxd) maxd = nd;
        }
        groups[0].push_back(m);
    }
    return g;
}

Graph generate(const AttachmentFunction& f, const GenConfig& cfg) {
    return cfg.variant == GenVariant::Naive ? generate_naive(f, cfg.n, cfg.seed)
                                            : generate_grouped(f, cfg.n, cfg.seed);
}

}  // namespace pag
