#include "botwatch/whoisgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace botwatch {

namespace {

constexpr std::int64_t kCreationBucketSecs = 3600;

struct GraphBuilder {
    LinkGraph graph;
    std::unordered_map<std::string, int> domain_ids;
    std::unordered_map<std::string, int> attribute_ids;

    int domain(const std::string& value) {
        const auto it = domain_ids.find(value);
        if (it != domain_ids.end()) return it->second;
        const int id = static_cast<int>(graph.nodes.size());
        graph.nodes.push_back(GraphNode{id, NodeKind::domain, value});
        domain_ids.emplace(value, id);
        return id;
    }

    int attribute(const std::string& value) {
        const auto it = attribute_ids.find(value);
        if (it != attribute_ids.end()) return it->second;
        const int id = static_cast<int>(graph.nodes.size());
        graph.nodes.push_back(GraphNode{id, NodeKind::attribute, value});
        attribute_ids.emplace(value, id);
        return id;
    }
};

}  // namespace

LinkGraph build_graph(const std::vector<WhoisRecord>& records) {
    if (records.empty()) throw std::runtime_error("cannot build graph from zero records");
    GraphBuilder builder;
    std::set<std::pair<int, int>> edge_set;
    for (const auto& rec : records) {
        const int dom = builder.domain(rec.domain);
        const auto link = [&](const std::string& family, const std::string& value) {
            const int attr = builder.attribute(family + ":" + value);
            edge_set.emplace(dom, attr);
        };
        if (rec.registrant_name) link("name", *rec.registrant_name);
        if (rec.registrant_email) link("email", *rec.registrant_email);
        if (rec.registrar) link("registrar", *rec.registrar);
        for (const auto& ns : rec.name_servers) link("ns", ns);
        if (rec.created) {
            link("created", std::to_string(*rec.created / kCreationBucketSecs));
        }
    }
    builder.graph.edges.assign(edge_set.begin(), edge_set.end());
    return builder.graph;
}

RankResult pagerank(const LinkGraph& graph, double damping, double tol, int max_iter) {
    if (graph.nodes.empty()) throw std::runtime_error("pagerank on empty graph");
    if (damping <= 0.0 || damping >= 1.0) throw std::runtime_error("damping must be in (0,1)");

    const auto n = graph.nodes.size();
    // Symmetrized adjacency: every bipartite edge counted in both directions.
    std::vector<std::vector<int>> out_links(n);
    for (const auto& [from, to] : graph.edges) {
        out_links[from].push_back(to);
        out_links[to].push_back(from);
    }

    std::vector<double> rank(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);
    const auto sweep = [&](const std::vector<double>& src, std::vector<double>& dst) {
        std::fill(dst.begin(), dst.end(), 0.0);
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            if (out_links[u].empty()) {
                dangling += src[u];
                continue;
            }
            const double share = src[u] / static_cast<double>(out_links[u].size());
            for (const int v : out_links[u]) dst[v] += share;
        }
        const double base = (1.0 - damping + damping * dangling) / static_cast<double>(n);
        for (auto& value : dst) value = base + damping * value;
    };

    RankResult result;
    result.algorithm = RankAlgorithm::pagerank;
    std::vector<double> mid(n, 0.0);
    for (int iter = 1; iter <= max_iter; ++iter) {
        sweep(rank, mid);
        sweep(mid, next);
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - rank[i]);
        rank.swap(next);
        result.iterations = iter;
        if (delta < tol) {
            result.converged = true;
            break;
        }
    }
    result.scores = std::move(rank);
    return result;
}

namespace {

// Cyclic Jacobi sweeps for a small dense symmetric matrix; returns the
// eigenvector of the largest eigenvalue. Used only as a finisher when power
// iteration stalls on a near-degenerate spectrum.
std::vector<double> dominant_eigenvector(std::vector<std::vector<double>> m) {
    const auto n = m.size();
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += m[p][q] * m[p][q];
        }
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (m[p][q] == 0.0) continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (m[i][i] > m[best][best]) best = i;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = v[i][best];
    return out;
}

constexpr std::size_t kDenseHitsLimit = 400;  // attributes; O(n^3) finisher

}  // namespace

RankResult hits(const LinkGraph& graph, double tol, int max_iter) {
    if (graph.edges.empty()) throw std::runtime_error("hits needs at least one edge");

    const auto n = graph.nodes.size();
    std::vector<double> hub(n, 1.0), authority(n, 1.0);
    const auto normalize = [](std::vector<double>& v) {
        double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        if (norm == 0.0) norm = 1.0;
        for (auto& value : v) value /= norm;
    };
    normalize(hub);
    normalize(authority);

    const auto round = [&]() {
        std::fill(authority.begin(), authority.end(), 0.0);
        for (const auto& [from, to] : graph.edges) authority[to] += hub[from];
        normalize(authority);
        std::fill(hub.begin(), hub.end(), 0.0);
        for (const auto& [from, to] : graph.edges) hub[from] += authority[to];
        normalize(hub);
    };

    RankResult result;
    result.algorithm = RankAlgorithm::hits;
    std::vector<double> prev_hub(n), prev_auth(n);
    for (int iter = 1; iter <= max_iter; ++iter) {
        prev_hub = hub;
        prev_auth = authority;
        round();
        round();
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            delta += std::abs(hub[i] - prev_hub[i]) + std::abs(authority[i] - prev_auth[i]);
        }
        result.iterations = iter;
        if (delta < tol) {
            result.converged = true;
            break;
        }
    }

    if (!result.converged) {
        // Power iteration is gap-limited: graphs whose leading A^T A
        // eigenvalues nearly tie drift slower than any tight tolerance
        // allows. Finish those with a dense eigensolve over the attribute
        // block when it is small enough.
        std::vector<int> attrs;
        std::vector<int> attr_index(n, -1);
        for (const auto& node : graph.nodes) {
            if (node.kind == NodeKind::attribute) {
                attr_index[node.id] = static_cast<int>(attrs.size());
                attrs.push_back(node.id);
            }
        }
        if (!attrs.empty() && attrs.size() <= kDenseHitsLimit) {
            const auto m = attrs.size();
            std::vector<std::vector<int>> domain_attrs;
            {
                std::map<int, std::vector<int>> by_domain;
                for (const auto& [from, to] : graph.edges) {
                    by_domain[from].push_back(attr_index[to]);
                }
                for (auto& [dom, list] : by_domain) domain_attrs.push_back(std::move(list));
            }
            std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
            for (const auto& list : domain_attrs) {
                for (const int a : list) {
                    for (const int b : list) ata[a][b] += 1.0;
                }
            }
            auto eigvec = dominant_eigenvector(ata);
            double total = 0.0;
            for (const double x : eigvec) total += x;
            if (total < 0.0) {
                for (auto& x : eigvec) x = -x;
            }
            std::fill(authority.begin(), authority.end(), 0.0);
            for (std::size_t a = 0; a < m; ++a) {
                authority[attrs[a]] = std::max(0.0, eigvec[a]);
            }
            normalize(authority);
            std::fill(hub.begin(), hub.end(), 0.0);
            for (const auto& [from, to] : graph.edges) hub[from] += authority[to];
            normalize(hub);
            result.converged = true;
        }
    }

    result.hub = std::move(hub);
    result.authority = std::move(authority);
    return result;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<std::vector<std::string>> campaigns(const std::vector<WhoisRecord>& records,
                                                std::int64_t window_secs) {
    if (window_secs <= 0) throw std::runtime_error("campaign window must be positive");
    const auto n = records.size();
    UnionFind uf(n);

    std::unordered_map<std::string, int> first_by_key;
    const auto join_on = [&](const std::string& key, std::size_t idx) {
        const auto [it, inserted] = first_by_key.emplace(key, static_cast<int>(idx));
        if (!inserted) uf.unite(static_cast<int>(idx), it->second);
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (records[i].registrant_email) join_on("e:" + *records[i].registrant_email, i);
        if (records[i].registrant_name) join_on("n:" + *records[i].registrant_name, i);
    }

    // Same registrar and creation times within the window: sort that
    // registrar's records by creation time and chain adjacent ones.
    std::map<std::string, std::vector<std::pair<std::int64_t, int>>> by_registrar;
    for (std::size_t i = 0; i < n; ++i) {
        if (records[i].registrar && records[i].created) {
            by_registrar[*records[i].registrar].emplace_back(*records[i].created,
                                                             static_cast<int>(i));
        }
    }
    for (auto& [registrar, entries] : by_registrar) {
        std::sort(entries.begin(), entries.end());
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (entries[i].first - entries[i - 1].first <= window_secs) {
                uf.unite(entries[i].second, entries[i - 1].second);
            }
        }
    }

    std::map<int, std::set<std::string>> members;
    for (std::size_t i = 0; i < n; ++i) {
        members[uf.find(static_cast<int>(i))].insert(records[i].domain);
    }
    std::vector<std::vector<std::string>> clusters;
    for (const auto& [root, domains] : members) {
        if (domains.size() < 2) continue;
        clusters.emplace_back(domains.begin(), domains.end());
    }
    std::sort(clusters.begin(), clusters.end());
    return clusters;
}

std::string to_dot(const LinkGraph& graph) {
    std::string out = "graph whois {\n";
    for (const auto& node : graph.nodes) {
        out += "  n" + std::to_string(node.id) + " [label=\"" + node.value + "\", shape=" +
               (node.kind == NodeKind::domain ? "box" : "ellipse") + "];\n";
    }
    for (const auto& [from, to] : graph.edges) {
        out += "  n" + std::to_string(from) + " -- n" + std::to_string(to) + ";\n";
    }
    out += "}\n";
    return out;
}

std::vector<int> ranked_nodes(const LinkGraph& graph, const std::vector<double>& scores) {
    std::vector<int> order(graph.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return graph.nodes[a].value < graph.nodes[b].value;
    });
    return order;
}

}  // namespace botwatch
