#pragma once

#include <algorithm>

#include <vector>

#include "treels/instance_io.hpp"
#include "treels/rng.hpp"
#include "treels/steiner.hpp"
#include "treels/wtap.hpp"

namespace treels::testing {

inline WtapInstance make_wtap(const std::vector<VertexPair>& edges, int root,
                              const std::vector<std::pair<VertexPair, double>>& links,
                              bool shadow_closed = false) {
    WtapInstance instance;
    instance.tree = build_rooted_tree(edges, root);
    for (const auto& [pair, weight] : links) {
        Link link;
        link.id = static_cast<int>(instance.links.size());
        link.a = pair.first;
        link.b = pair.second;
        link.weight = weight;
        instance.links.push_back(link);
    }
    instance.shadow_closed = shadow_closed;
    return instance;
}

// Path r - v1 - v2 with links {r,v2} w=3, {r,v1} w=1, {v1,v2} w=1.
inline WtapInstance path3_fixture() {
    return make_wtap({{0, 1}, {1, 2}}, 0, {{{0, 2}, 3.0}, {{0, 1}, 1.0}, {{1, 2}, 1.0}});
}

inline SteinerInstance make_steiner(int n, const std::vector<std::pair<VertexPair, double>>& edges,
                                    const std::vector<int>& terminals) {
    SteinerInstance instance;
    instance.vertex_count = n;
    for (const auto& [pair, weight] : edges) {
        SteinerEdge edge;
        edge.id = static_cast<int>(instance.edges.size());
        edge.a = pair.first;
        edge.b = pair.second;
        edge.weight = weight;
        instance.edges.push_back(edge);
    }
    instance.terminals = terminals;
    return instance;
}

// Non-terminal center 0 with unit edges to terminals 1, 2, 3.
inline SteinerInstance steiner_star_fixture() {
    return make_steiner(4, {{{0, 1}, 1.0}, {{0, 2}, 1.0}, {{0, 3}, 1.0}}, {1, 2, 3});
}

// Inclusion-minimal cover obtained by pruning in a seeded random order;
// used to diversify witness structures in agreement tests.
inline std::vector<int> random_cover(const WtapInstance& instance, Rng& rng) {
    const int m = static_cast<int>(instance.links.size());
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    for (int i = m - 1; i > 0; --i)
        std::swap(order[i], order[rng.next_below(static_cast<std::uint64_t>(i + 1))]);

    std::vector<int> cover_count(instance.tree.edge_count(), 0);
    std::vector<std::vector<int>> paths(m);
    for (int i = 0; i < m; ++i) {
        paths[i] = path_edges(instance.tree, {instance.links[i].a, instance.links[i].b});
        for (int e : paths[i]) ++cover_count[e];
    }
    std::vector<char> kept(m, 1);
    for (int id : order) {
        bool removable = true;
        for (int e : paths[id])
            if (cover_count[e] == 1) {
                removable = false;
                break;
            }
        if (removable) {
            kept[id] = 0;
            for (int e : paths[id]) --cover_count[e];
        }
    }
    std::vector<int> result;
    for (int i = 0; i < m; ++i)
        if (kept[i]) result.push_back(i);
    return result;
}

// Seeded small WTAP instance whose shadow closure stays within max_links.
inline WtapInstance small_closed_wtap(std::uint64_t seed, int max_links, int max_n = 7,
                                      int max_weight = 10) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng(seed * 1000003ULL + attempt);
        GeneratorConfig config;
        config.seed = rng.next();
        config.vertex_count = 3 + static_cast<int>(rng.next_below(max_n - 2));
        int max_pairs = config.vertex_count * (config.vertex_count - 1) / 2;
        config.edge_count = std::min(
            max_pairs,
            2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(config.vertex_count))));
        config.max_weight = max_weight;
        WtapInstance closed = shadow_close(gen_wtap(config));
        if (static_cast<int>(closed.links.size()) <= max_links) return closed;
    }
}

}  // namespace treels::testing
