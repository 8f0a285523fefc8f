#include "pag/size_bias.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "pag/generate.hpp"

namespace pag {

namespace {

// Non-linear f has no closed-form moment ratios; precompute them up to this
// size, recompute per draw beyond it.
constexpr uint32_t kRatioTableMaxN = 128;

void require_deletion_args(uint32_t k, uint32_t ell, uint32_t i, uint32_t n) {
    if (ell == 0 || k <= ell || k > n || i == 0 || i > n || i == k || i == ell) {
        throw std::invalid_argument(
            "deletion probability requires 1 <= ell < k <= n and i distinct from both");
    }
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double deletion_probability(const AttachmentFunction& f, uint32_t k, uint32_t ell, uint32_t i,
                            uint32_t n) {
    require_deletion_args(k, ell, i, n);
    if (ell > i) return 0.0;
    if (f.is_linear()) {
        const LinearMomentCache cache(f, n);
        const uint32_t t = k - 1;
        const double ratio = t < i ? cache.ratio_pre(ell, i, t) : cache.ratio_post(ell, i);
        return clamp_unit(1.0 - ratio);
    }
    const ConditionalMoments cm = conditional_moments(f, ell, i, n);
    const uint32_t t = k - 1;
    return clamp_unit(1.0 - cm.tilde_at(t) / cm.plain_at(t));
}

CouplingContext::CouplingContext(const AttachmentFunction& f, uint32_t n)
    : f_(f), n_(n), iso_(f, n) {
    if (f.is_linear()) {
        lin_ = std::make_unique<LinearMomentCache>(f, n);
        return;
    }
    if (n <= kRatioTableMaxN) {
        ratio_.resize(n >= 2 ? n - 1 : 0);
        for (uint32_t ell = 1; ell < n; ++ell) {
            auto& per_i = ratio_[ell - 1];
            per_i.reserve(n - ell);
            for (uint32_t i = ell + 1; i <= n; ++i) per_i.push_back(ratio_column(ell, i));
        }
        has_ratio_table_ = true;
    }
}

std::vector<double> CouplingContext::ratio_column(uint32_t ell, uint32_t i) const {
    const ConditionalMoments cm = conditional_moments(f_, ell, i, n_);
    std::vector<double> col(n_ - ell + 1);
    for (uint32_t t = ell; t <= n_; ++t) col[t - ell] = cm.tilde_at(t) / cm.plain_at(t);
    return col;
}

double CouplingContext::deletion_prob(uint32_t k, uint32_t ell, uint32_t i) const {
    require_deletion_args(k, ell, i, n_);
    if (ell > i) return 0.0;
    const uint32_t t = k - 1;
    if (lin_) {
        const double ratio = t < i ? lin_->ratio_pre(ell, i, t) : lin_->ratio_post(ell, i);
        return clamp_unit(1.0 - ratio);
    }
    if (has_ratio_table_) return clamp_unit(1.0 - ratio_[ell - 1][i - ell - 1][t - ell]);
    return clamp_unit(1.0 - ratio_column(ell, i)[t - ell]);
}

CoupledGraph CouplingContext::build_coupled(const Graph& g, uint32_t i, Rng& rng) const {
    if (g.n != n_) throw std::invalid_argument("build_coupled: graph size differs from context");
    if (i == 0 || i > n_) throw std::invalid_argument("build_coupled: vertex out of range");
    CoupledGraph out;
    out.base = g;
    out.i = i;
    out.kept_edges.reserve(g.edges.size());
    out.deletion_log.reserve(g.edges.size());

    // Slow path only: per-target ratio columns computed for this draw.
    std::unordered_map<uint32_t, std::vector<double>> local;
    const bool slow = !lin_ && !has_ratio_table_;

    for (const Edge& e : g.edges) {
        if (e.src == i || e.dst == i) {
            out.deletion_log.push_back({e, 1.0, true});
            continue;
        }
        double p = 0.0;
        if (e.dst < i) {
            if (slow) {
                auto it = local.find(e.dst);
                if (it == local.end()) it = local.emplace(e.dst, ratio_column(e.dst, i)).first;
                p = clamp_unit(1.0 - it->second[e.src - 1 - e.dst]);
            } else {
                p = deletion_prob(e.src, e.dst, i);
            }
        }
        const bool deleted = p > 0.0 && rng.bernoulli(p);
        out.deletion_log.push_back({e, p, deleted});
        if (!deleted) out.kept_edges.push_back(e);
    }
    return out;
}

CouplingSample decompose(const Graph& g, const CoupledGraph& cg) {
    const Graph& base = cg.base;
    const uint32_t n = base.n;
    if (g.n != n || !(g.edges == base.edges)) {
        throw std::logic_error("decompose: coupled graph was built over a different base");
    }
    if (cg.deletion_log.size() != base.edges.size()) {
        throw std::logic_error("decompose: deletion log does not cover the base edges");
    }

    std::vector<uint32_t> indeg(n + 1, 0), outdeg(n + 1, 0);
    size_t kept = 0, log_pos = 0;
    for (const DeletionRecord& rec : cg.deletion_log) {
        if (!(rec.edge == base.edges[log_pos])) {
            throw std::logic_error("decompose: deletion log out of order");
        }
        ++log_pos;
        if (rec.deleted) continue;
        if (kept >= cg.kept_edges.size() || !(cg.kept_edges[kept] == rec.edge)) {
            throw std::logic_error("decompose: kept edges disagree with the deletion log");
        }
        if (rec.edge.src == cg.i || rec.edge.dst == cg.i) {
            throw std::logic_error("decompose: vertex i is not isolated in the coupled graph");
        }
        ++outdeg[rec.edge.src];
        ++indeg[rec.edge.dst];
        ++kept;
    }
    if (kept != cg.kept_edges.size()) {
        throw std::logic_error("decompose: kept/deleted counts do not add up");
    }

    CouplingSample s;
    s.i = cg.i;
    s.w = isolated_count(base);
    s.deg_pos = base.indegree[cg.i] + base.outdegree[cg.i] > 0 ? 1 : 0;

    // Neighbours of i whose only edge went to i: deterministically isolated.
    std::vector<bool> lone_neighbour(n + 1, false);
    for (const Edge& e : base.edges) {
        const uint32_t j = e.src == cg.i ? e.dst : e.dst == cg.i ? e.src : 0;
        if (j != 0 && base.indegree[j] + base.outdegree[j] == 1) lone_neighbour[j] = true;
    }
    uint32_t w_s = 0, d = 0, r = 0;
    for (uint32_t v = 1; v <= n; ++v) {
        if (lone_neighbour[v]) ++d;
        const bool iso_now = indeg[v] == 0 && outdeg[v] == 0;
        if (!iso_now) continue;
        ++w_s;
        const bool iso_before = base.indegree[v] == 0 && base.outdegree[v] == 0;
        if (!iso_before && v != cg.i && !lone_neighbour[v]) ++r;
    }
    s.w_s = w_s;
    s.d = d;
    s.r = r;
    if (s.w_s - s.w != s.d + s.deg_pos + s.r) {
        throw std::logic_error("decompose: w_s - w != d + deg_pos + r");
    }
    return s;
}

CouplingSample CouplingContext::sample_given(const Graph& g, uint64_t rep_seed) const {
    if (g.n != n_) throw std::invalid_argument("sample_given: graph size differs from context");
    Rng sel(mix_seed(rep_seed, kStreamSelect));
    const uint32_t i = iso_.sample_index(sel);
    if (g.indegree[i] + g.outdegree[i] == 0) {
        const uint32_t w = isolated_count(g);
        return CouplingSample{w, w, i, 0, 0, 0};
    }
    Rng thin(mix_seed(rep_seed, kStreamThin));
    return decompose(g, build_coupled(g, i, thin));
}

CouplingSample CouplingContext::sample(uint64_t rep_seed) const {
    const Graph g = generate_grouped(f_, n_, mix_seed(rep_seed, kStreamGen));
    return sample_given(g, rep_seed);
}

CoupledGraph build_coupled(const Graph& g, uint32_t i, const AttachmentFunction& f, Rng& rng) {
    const CouplingContext ctx(f, g.n);
    return ctx.build_coupled(g, i, rng);
}

CouplingSample coupling_sample(const AttachmentFunction& f, uint32_t n, uint64_t rep_seed) {
    const CouplingContext ctx(f, n);
    return ctx.sample(rep_seed);
}

}  // namespace pag
