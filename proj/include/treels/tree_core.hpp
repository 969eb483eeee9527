#pragma once

#include <span>
#include <utility>
#include <vector>

namespace treels {

using VertexPair = std::pair<int, int>;  // unordered; normalized (min, max) where noted

// A candidate augmentation edge between two tree vertices. Covers the tree
// edges on the unique path between its endpoints.
struct Link {
    int id = -1;
    int a = -1;
    int b = -1;
    double weight = 0.0;
};

// Immutable rooted spanning tree. Vertices are dense 0-based ints; tree edge
// ids follow the input edge order. Safe for concurrent reads.
struct RootedTree {
    int vertex_count = 0;
    int root = 0;
    std::vector<int> parent;  // parent[root] == root
    std::vector<int> depth;   // depth[root] == 0
    std::vector<int> up_edge;             // up_edge[v] = id of edge {v, parent[v]}, -1 at root
    std::vector<VertexPair> edge_ends;    // edge id -> endpoints as given in the input

    int edge_count() const { return vertex_count - 1; }

    // Edge id of tree edge {u, v}, or -1 when {u, v} is not a tree edge.
    int edge_between(int u, int v) const;
};

RootedTree build_rooted_tree(const std::vector<VertexPair>& edges, int root);

// Deepest common ancestor of the two endpoints.
int apex(const RootedTree& tree, VertexPair pair);

// Tree edge ids on the unique path between the endpoints, ascending.
// Returns the empty set when both endpoints coincide.
std::vector<int> path_edges(const RootedTree& tree, VertexPair pair);

// All vertices on the unique path between the endpoints, endpoints included.
std::vector<int> path_vertices(const RootedTree& tree, VertexPair pair);

// True iff the candidate pair's path is contained in the other pair's path.
bool is_shadow(const RootedTree& tree, VertexPair candidate, VertexPair of);

// True iff every tree edge lies on the path of some link.
bool is_cover(const RootedTree& tree, std::span<const Link> links);
bool is_cover(const RootedTree& tree, const std::vector<VertexPair>& pairs);

}  // namespace treels
