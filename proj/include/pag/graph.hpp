#pragma once

// A realized preferential attachment graph. Vertices are labelled 1..n by
// birth time; every edge points from the younger endpoint to the older one
// (src > dst). Outdegree is fixed at the owner's birth step, indegree only
// grows afterwards.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pag {

struct Edge {
    uint32_t src;
    uint32_t dst;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Graph {
    uint32_t n = 0;
    std::vector<Edge> edges;            // insertion order
    std::vector<uint32_t> indegree;     // size n+1, index 0 unused
    std::vector<uint32_t> outdegree;    // size n+1, index 0 unused

    static Graph empty(uint32_t n);
    void add_edge(uint32_t src, uint32_t dst);
};

// Number of vertices with indegree 0 and outdegree 0.
uint32_t isolated_count(const Graph& g);

struct DegreeHistograms {
    std::map<uint32_t, uint64_t> indegree;
    std::map<uint32_t, uint64_t> outdegree;
};
DegreeHistograms degree_histograms(const Graph& g);

enum class ExportFormat { EdgeCsv, Dot };

// EdgeCsv: header "src,dst" then one edge per line, LF endings, insertion
// order. Dot: a digraph listing all vertices and the same edges.
std::string export_graph(const Graph& g, ExportFormat format);

}  // namespace pag
