#include "treels/tree_core.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "treels/errors.hpp"

namespace treels {

namespace {

void require_vertex(const RootedTree& tree, int v) {
    if (v < 0 || v >= tree.vertex_count)
        throw BadVertex("vertex " + std::to_string(v) + " out of range [0, " +
                        std::to_string(tree.vertex_count) + ")");
}

}  // namespace

int RootedTree::edge_between(int u, int v) const {
    if (u != root && parent[u] == v) return up_edge[u];
    if (v != root && parent[v] == u) return up_edge[v];
    return -1;
}

RootedTree build_rooted_tree(const std::vector<VertexPair>& edges, int root) {
    const int n = static_cast<int>(edges.size()) + 1;
    if (root < 0 || root >= n) throw BadVertex("root " + std::to_string(root) + " out of range");
    for (const auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw BadVertex("edge endpoint out of range [0, " + std::to_string(n) + ")");
        if (u == v) throw NotATree("self-loop at vertex " + std::to_string(u));
    }

    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        adj[edges[e].first].push_back({edges[e].second, e});
        adj[edges[e].second].push_back({edges[e].first, e});
    }

    RootedTree tree;
    tree.vertex_count = n;
    tree.root = root;
    tree.parent.assign(n, -1);
    tree.depth.assign(n, 0);
    tree.up_edge.assign(n, -1);
    tree.edge_ends = edges;

    tree.parent[root] = root;
    std::queue<int> queue;
    queue.push(root);
    int reached = 1;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop();
        for (auto [v, e] : adj[u]) {
            if (tree.parent[v] != -1) continue;
            tree.parent[v] = u;
            tree.depth[v] = tree.depth[u] + 1;
            tree.up_edge[v] = e;
            ++reached;
            queue.push(v);
        }
    }
    if (reached != n)
        throw NotATree("edge list is not a spanning tree (cycle or disconnected)");
    return tree;
}

int apex(const RootedTree& tree, VertexPair pair) {
    require_vertex(tree, pair.first);
    require_vertex(tree, pair.second);
    int a = pair.first, b = pair.second;
    while (tree.depth[a] > tree.depth[b]) a = tree.parent[a];
    while (tree.depth[b] > tree.depth[a]) b = tree.parent[b];
    while (a != b) {
        a = tree.parent[a];
        b = tree.parent[b];
    }
    return a;
}

std::vector<int> path_edges(const RootedTree& tree, VertexPair pair) {
    require_vertex(tree, pair.first);
    require_vertex(tree, pair.second);
    std::vector<int> result;
    int a = pair.first, b = pair.second;
    while (tree.depth[a] > tree.depth[b]) {
        result.push_back(tree.up_edge[a]);
        a = tree.parent[a];
    }
    while (tree.depth[b] > tree.depth[a]) {
        result.push_back(tree.up_edge[b]);
        b = tree.parent[b];
    }
    while (a != b) {
        result.push_back(tree.up_edge[a]);
        result.push_back(tree.up_edge[b]);
        a = tree.parent[a];
        b = tree.parent[b];
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<int> path_vertices(const RootedTree& tree, VertexPair pair) {
    require_vertex(tree, pair.first);
    require_vertex(tree, pair.second);
    std::vector<int> left, right;
    int a = pair.first, b = pair.second;
    while (tree.depth[a] > tree.depth[b]) {
        left.push_back(a);
        a = tree.parent[a];
    }
    while (tree.depth[b] > tree.depth[a]) {
        right.push_back(b);
        b = tree.parent[b];
    }
    while (a != b) {
        left.push_back(a);
        right.push_back(b);
        a = tree.parent[a];
        b = tree.parent[b];
    }
    left.push_back(a);  // the apex
    left.insert(left.end(), right.rbegin(), right.rend());
    return left;
}

bool is_shadow(const RootedTree& tree, VertexPair candidate, VertexPair of) {
    std::vector<int> inner = path_edges(tree, candidate);
    std::vector<int> outer = path_edges(tree, of);
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

bool is_cover(const RootedTree& tree, const std::vector<VertexPair>& pairs) {
    std::vector<char> covered(tree.edge_count(), 0);
    for (const auto& p : pairs)
        for (int e : path_edges(tree, p)) covered[e] = 1;
    return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

bool is_cover(const RootedTree& tree, std::span<const Link> links) {
    std::vector<VertexPair> pairs;
    pairs.reserve(links.size());
    for (const Link& link : links) pairs.push_back({link.a, link.b});
    return is_cover(tree, pairs);
}

}  // namespace treels
