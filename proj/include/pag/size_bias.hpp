#pragma once

// Size-bias coupling for the isolated-vertex count W. A vertex I is selected
// with probability proportional to its isolation probability theta_{i,n};
// the coupled graph removes every edge incident to I and independently thins
// each remaining edge (k, l) with the deletion probability
//   1 - mu_tilde_{k-1}(l, I) / mu_{k-1}(l),
// the relative drop of E[f(indeg(l))] caused by conditioning on I sending no
// edge to l. Thinning matches the conditional edge law exactly for sources
// born after I and for targets born after I; for edges fully in I's past it
// is an approximation (the conditioning also tilts the source's own decision,
// which a per-target rate cannot express). See the marginal-fidelity tests.

#include <cstdint>
#include <memory>
#include <vector>

#include "pag/attachment.hpp"
#include "pag/exact_law.hpp"
#include "pag/graph.hpp"
#include "pag/rng.hpp"

namespace pag {

struct DeletionRecord {
    Edge edge;
    double prob;   // deletion probability applied (1 for edges incident to i)
    bool deleted;
};

struct CoupledGraph {
    Graph base;
    uint32_t i = 0;                         // forced-isolated vertex
    std::vector<Edge> kept_edges;           // surviving edges, base order
    std::vector<DeletionRecord> deletion_log;  // one record per base edge
};

// One coupled draw, flattened. The newly isolated vertices split exactly into
// i itself (iff it had positive degree), i's neighbours whose total degree
// was 1 (isolated by removing i's edges), and the rest (isolated by the
// thinning), so w_s - w = d + deg_pos + r always. A selection that is already
// isolated skips the rebuild: deg_pos == 0 implies d == r == 0 and w_s == w.
struct CouplingSample {
    uint32_t w = 0;        // isolated count in the base graph
    uint32_t w_s = 0;      // isolated count in the coupled graph (counts i)
    uint32_t i = 0;        // selected vertex
    uint32_t d = 0;        // neighbours of i with total degree 1 in the base
    uint32_t deg_pos = 0;  // 1 iff i has positive degree in the base
    uint32_t r = 0;        // remaining newly isolated vertices (thinning)
};

// Probability that a present edge k -> ell is deleted when vertex i is forced
// isolated. Requires k > ell >= 1, k <= n, i <= n, i not in {k, ell}.
// Returns 0 when ell > i (those edge laws are unaffected).
double deletion_probability(const AttachmentFunction& f, uint32_t k, uint32_t ell, uint32_t i,
                            uint32_t n);

// Caches per (f, n): the isolation weight table for selecting I and the
// moment tables behind deletion probabilities (closed forms for linear f, a
// precomputed ratio table for small non-linear n). Read-only after
// construction, safe to share across threads.
class CouplingContext {
  public:
    CouplingContext(const AttachmentFunction& f, uint32_t n);

    uint32_t n() const { return n_; }
    const AttachmentFunction& attachment() const { return f_; }
    const IsolationTable& isolation() const { return iso_; }

    uint32_t select_index(Rng& rng) const { return iso_.sample_index(rng); }
    double deletion_prob(uint32_t k, uint32_t ell, uint32_t i) const;

    // Removes i's incident edges and thins the rest; always rebuilds, even if
    // i is already isolated. rng drives the thinning only.
    CoupledGraph build_coupled(const Graph& g, uint32_t i, Rng& rng) const;

    // Full draw from one replication seed: generate (kStreamGen), select I
    // (kStreamSelect), and unless I is already isolated, thin (kStreamThin).
    CouplingSample sample(uint64_t rep_seed) const;
    // Same, but on a caller-supplied base graph (used by the conditional-
    // variance estimator, which holds the graph fixed across inner draws).
    CouplingSample sample_given(const Graph& g, uint64_t rep_seed) const;

  private:
    AttachmentFunction f_;
    uint32_t n_;
    IsolationTable iso_;
    std::unique_ptr<LinearMomentCache> lin_;
    // ratio_[ell-1][i - ell - 1][t - ell] = mu_tilde_t(ell, i) / mu_t(ell);
    // only built for non-linear f with n small enough to afford it.
    std::vector<std::vector<std::vector<double>>> ratio_;
    bool has_ratio_table_ = false;

    std::vector<double> ratio_column(uint32_t ell, uint32_t i) const;
};

// Convenience wrappers used by tests; heavier callers hold a CouplingContext.
CoupledGraph build_coupled(const Graph& g, uint32_t i, const AttachmentFunction& f, Rng& rng);
CouplingSample coupling_sample(const AttachmentFunction& f, uint32_t n, uint64_t rep_seed);

// Flattens a coupled graph built over g (requires cg.base == g), checking the
// structural invariants: every base edge accounted for, i isolated among the
// kept edges, and the exact identity w_s - w = d + deg_pos + r.
CouplingSample decompose(const Graph& g, const CoupledGraph& cg);

}  // namespace pag
