// Bipartite domain/attribute graph over WHOIS records, with PageRank and
// HITS ranking plus bulk-registration campaign clustering.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "botwatch/corpus.hpp"

namespace botwatch {

enum class NodeKind { domain, attribute };

struct GraphNode {
    int id = 0;
    NodeKind kind = NodeKind::domain;
    std::string value;  // attribute values carry a "family:" prefix
};

struct LinkGraph {
    std::vector<GraphNode> nodes;
    std::vector<std::pair<int, int>> edges;  // domain node -> attribute node
};

// One attribute node per distinct (family, value) among registrant name,
// registrant email, registrar, name servers and 1h creation-date buckets;
// one edge per present attribute of each domain. Duplicate domains collapse
// onto one node.
LinkGraph build_graph(const std::vector<WhoisRecord>& records);

enum class RankAlgorithm { pagerank, hits };

struct RankResult {
    RankAlgorithm algorithm = RankAlgorithm::pagerank;
    std::vector<double> scores;     // pagerank: per node, sums to 1
    std::vector<double> hub;        // hits: domains carry the hub mass
    std::vector<double> authority;  // hits: attributes carry the authority mass
    int iterations = 0;
    bool converged = false;
};

// Damped power iteration over the symmetrized edge set, dangling mass
// redistributed uniformly. Each reported iteration applies two sweeps; the
// bipartite walk alternates sides, so deltas are measured between same-side
// states (single sweeps oscillate and stall above any tight tolerance).
RankResult pagerank(const LinkGraph& graph, double damping = 0.85,
                    double tol = 1e-10, int max_iter = 100);

// Standard HITS on the directed bipartite edges, hub/authority vectors
// L2-normalized every step; two update rounds per reported iteration,
// mirroring pagerank's convergence handling. When the spectrum nearly ties
// and power iteration stalls, small graphs are finished by a dense
// eigensolve of the attribute co-occurrence block.
RankResult hits(const LinkGraph& graph, double tol = 1e-10, int max_iter = 100);

// Connected components under: shared registrant email or name, or same
// registrar with creation times within `window_secs`. Singletons are
// suppressed. Clusters and their members come out sorted.
std::vector<std::vector<std::string>> campaigns(const std::vector<WhoisRecord>& records,
                                                std::int64_t window_secs);

// Graphviz text for external visualization.
std::string to_dot(const LinkGraph& graph);

// Stable rank ordering: by descending score, then node value.
std::vector<int> ranked_nodes(const LinkGraph& graph, const std::vector<double>& scores);

}  // namespace botwatch
