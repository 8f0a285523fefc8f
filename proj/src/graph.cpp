#include "pag/graph.hpp"

#include <cassert>

namespace pag {

Graph Graph::empty(uint32_t n) {
    Graph g;
    g.n = n;
    g.indegree.assign(n + 1, 0);
    g.outdegree.assign(n + 1, 0);
    return g;
}

void Graph::add_edge(uint32_t src, uint32_t dst) {
    assert(src > dst && dst >= 1 && src <= n);
    edges.push_back({src, dst});
    ++indegree[dst];
    ++outdegree[src];
}

uint32_t isolated_count(const Graph& g) {
    uint32_t w = 0;
    for (uint32_t v = 1; v <= g.n; ++v) {
        if (g.indegree[v] == 0 && g.outdegree[v] == 0) ++w;
    }
    return w;
}

DegreeHistograms degree_histograms(const Graph& g) {
    DegreeHistograms h;
    for (uint32_t v = 1; v <= g.n; ++v) {
        ++h.indegree[g.indegree[v]];
        ++h.outdegree[g.outdegree[v]];
    }
    return h;
}

std::string export_graph(const Graph& g, ExportFormat format) {
    std::string out;
    if (format == ExportFormat::EdgeCsv) {
        out = "src,dst\n";
        for (const Edge& e : g.edges) {
            out += std::to_string(e.src);
            out += ',';
            out += std::to_string(e.dst);
            out += '\n';
        }
        return out;
    }
    out = "digraph pa {\n";
    for (uint32_t v = 1; v <= g.n; ++v) {
        out += "  " + std::to_string(v) + ";\n";
    }
    for (const Edge& e : g.edges) {
        out += "  " + std::to_string(e.src) + " -> " + std::to_string(e.dst) + ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace pag
