#include "pag/enumerate.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace pag {

namespace {

struct EnumState {
    const AttachmentFunction* f = nullptr;
    uint32_t n = 0;
    uint32_t indeg[8] = {0};
    uint32_t outdeg[8] = {0};
    uint64_t adj = 0;
    const std::function<void(double, uint64_t, uint32_t)>* visit = nullptr;
};

void enumerate_from(EnumState& st, uint32_t m, double prob) {
    if (m > st.n) {
        uint32_t iso = 0;
        for (uint32_t v = 1; v <= st.n; ++v) {
            if (st.indeg[v] == 0 && st.outdeg[v] == 0) iso |= 1u << v;
        }
        (*st.visit)(prob, st.adj, iso);
        return;
    }
    // st.n <= kEnumerateForcedMaxN, so this never fires; it pins the array
    // bounds (indeg/outdeg[8], shift m*8+k) for the optimizer.
    if (m > kEnumerateForcedMaxN) return;
    // Edge probabilities are frozen at the time-(m-1) indegrees, so compute
    // them before recursing over the subset choices.
    double p[8];
    const double inv = 1.0 / static_cast<double>(m - 1);
    for (uint32_t k = 1; k < m; ++k) p[k] = (*st.f)(st.indeg[k]) * inv;

    const uint32_t subsets = 1u << (m - 1);
    for (uint32_t s = 0; s < subsets; ++s) {
        double q = prob;
        for (uint32_t k = 1; k < m; ++k) {
            q *= (s >> (k - 1)) & 1u ? p[k] : 1.0 - p[k];
        }
        if (q == 0.0) continue;
        for (uint32_t k = 1; k < m; ++k) {
            if ((s >> (k - 1)) & 1u) {
                ++st.indeg[k];
                st.adj |= 1ull << (m * 8 + k);
            }
        }
        st.outdeg[m] = static_cast<uint32_t>(std::popcount(s));
        enumerate_from(st, m + 1, q);
        st.outdeg[m] = 0;
        for (uint32_t k = 1; k < m; ++k) {
            if ((s >> (k - 1)) & 1u) {
                --st.indeg[k];
                st.adj &= ~(1ull << (m * 8 + k));
            }
        }
    }
}

}  // namespace

void enumerate_graphs(const AttachmentFunction& f, uint32_t n,
                      const std::function<void(double, uint64_t, uint32_t)>& visit, bool force) {
    const uint32_t cap = force ? kEnumerateForcedMaxN : kEnumerateMaxN;
    if (n == 0 || n > cap) {
        throw std::invalid_argument("enumerate_graphs requires 1 <= n <= " + std::to_string(cap));
    }
    EnumState st;
    st.f = &f;
    st.n = n;
    st.visit = &visit;
    enumerate_from(st, 2, 1.0);
}

uint64_t edge_mask(const Graph& g) {
    if (g.n > 7) throw std::invalid_argument("edge_mask requires n <= 7");
    uint64_t mask = 0;
    for (const Edge& e : g.edges) mask |= 1ull << (e.src * 8 + e.dst);
    return mask;
}

ExactEnumeration enumerate_exact(const AttachmentFunction& f, uint32_t n, bool force) {
    ExactEnumeration out;
    out.n = n;
    out.w_dist.assign(static_cast<size_t>(n) + 1, 0.0);
    out.isolation_probs.assign(static_cast<size_t>(n) + 1, 0.0);
    out.pair_cov.assign(n + 1, std::vector<double>(n + 1, 0.0));
    out.edge_marginals.assign(n + 1, std::vector<double>(n + 1, 0.0));

    // pair_cov first accumulates E[1_i 1_j], centered below.
    enumerate_graphs(f, n, [&](double prob, uint64_t adj, uint32_t iso) {
        out.w_dist[std::popcount(iso)] += prob;
        for (uint32_t i = 1; i <= n; ++i) {
            if (!((iso >> i) & 1u)) continue;
            out.isolation_probs[i] += prob;
            for (uint32_t j = 1; j <= n; ++j) {
                if ((iso >> j) & 1u) out.pair_cov[i][j] += prob;
            }
        }
        for (uint32_t k = 2; k <= n; ++k) {
            for (uint32_t l = 1; l < k; ++l) {
                if ((adj >> (k * 8 + l)) & 1u) out.edge_marginals[k][l] += prob;
            }
        }
    }, force);

    for (uint32_t w = 0; w <= n; ++w) out.mean += w * out.w_dist[w];
    for (uint32_t i = 1; i <= n; ++i) {
        for (uint32_t j = 1; j <= n; ++j) {
            out.pair_cov[i][j] -= out.isolation_probs[i] * out.isolation_probs[j];
        }
    }
    return out;
}

double conditional_edge_marginal(const AttachmentFunction& f, uint32_t n, uint32_t k, uint32_t ell,
                                 uint32_t i) {
    if (ell >= k || k > n || i > n || i == k || i == ell || ell == 0) {
        throw std::invalid_argument("conditional_edge_marginal requires ell < k <= n, i distinct");
    }
    double joint = 0.0, cond = 0.0;
    enumerate_graphs(f, n, [&](double prob, uint64_t adj, uint32_t iso) {
        if (!((iso >> i) & 1u)) return;
        cond += prob;
        if ((adj >> (k * 8 + ell)) & 1u) joint += prob;
    });
    if (cond <= 0.0) throw std::domain_error("conditional_edge_marginal: conditioning event has probability zero");
    return joint / cond;
}

}  // namespace pag
