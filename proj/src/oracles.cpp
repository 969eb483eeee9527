#include "treels/oracles.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <map>
#include <set>

#include "treels/errors.hpp"

namespace treels {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Two-pointer walk, independent of tree_core's phase-based traversal.
std::vector<int> walk_path_edges(const RootedTree& tree, int a, int b) {
    std::vector<int> edges;
    while (a != b) {
        if (tree.depth[a] >= tree.depth[b]) {
            edges.push_back(tree.up_edge[a]);
            a = tree.parent[a];
        } else {
            edges.push_back(tree.up_edge[b]);
            b = tree.parent[b];
        }
    }
    return edges;
}

std::vector<int> walk_path_vertices(const RootedTree& tree, int a, int b) {
    std::vector<int> vertices;
    while (a != b) {
        if (tree.depth[a] >= tree.depth[b]) {
            vertices.push_back(a);
            a = tree.parent[a];
        } else {
            vertices.push_back(b);
            b = tree.parent[b];
        }
    }
    vertices.push_back(a);
    return vertices;
}

struct Disjoint {
    std::vector<int> parent;
    explicit Disjoint(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

OracleReport opt_wtap_bruteforce(const WtapInstance& instance, int max_links) {
    const auto start = Clock::now();
    const int m = static_cast<int>(instance.links.size());
    if (m > max_links)
        throw SizeLimit("bruteforce over " + std::to_string(m) + " links exceeds limit " +
                        std::to_string(max_links));
    const int edge_count = instance.tree.edge_count();

    std::vector<std::vector<int>> paths(m);
    for (int i = 0; i < m; ++i)
        paths[i] = walk_path_edges(instance.tree, instance.links[i].a, instance.links[i].b);

    // suffix_coverable[i][e]: some link with id >= i covers edge e
    std::vector<std::vector<char>> suffix_coverable(m + 1, std::vector<char>(edge_count, 0));
    for (int i = m - 1; i >= 0; --i) {
        suffix_coverable[i] = suffix_coverable[i + 1];
        for (int e : paths[i]) suffix_coverable[i][e] = 1;
    }
    for (int e = 0; e < edge_count; ++e)
        if (edge_count > 0 && !suffix_coverable[0][e])
            throw Infeasible("tree edge " + std::to_string(e) + " is covered by no link");

    OracleReport report;
    report.opt_value = -1.0;
    std::vector<int> cover_count(edge_count, 0);
    int uncovered = edge_count;
    std::vector<int> chosen;
    long long nodes = 0;

    auto search = [&](auto&& self, int idx, double weight) -> void {
        ++nodes;
        if (uncovered == 0) {
            if (report.opt_value < 0.0 || weight < report.opt_value) {
                report.opt_value = weight;
                report.certificate = chosen;
            }
            return;  // supersets only cost more
        }
        if (idx == m) return;
        if (report.opt_value >= 0.0 && weight >= report.opt_value) return;
        for (int e = 0; e < edge_count; ++e)
            if (cover_count[e] == 0 && !suffix_coverable[idx][e]) return;

        for (int e : paths[idx])
            if (cover_count[e]++ == 0) --uncovered;
        chosen.push_back(idx);
        self(self, idx + 1, weight + instance.links[idx].weight);
        chosen.pop_back();
        for (int e : paths[idx])
            if (--cover_count[e] == 0) ++uncovered;

        self(self, idx + 1, weight);
    };
    search(search, 0, 0.0);

    report.search_space_size = nodes;
    report.elapsed_ms = ms_since(start);
    return report;
}

OracleReport opt_steiner_exact(const SteinerInstance& instance, int max_terminals) {
    const auto start = Clock::now();
    std::vector<int> terminals(instance.terminals);
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    if (static_cast<int>(terminals.size()) > max_terminals)
        throw SizeLimit("exact Steiner over " + std::to_string(terminals.size()) +
                        " terminals exceeds limit " + std::to_string(max_terminals));
    DreyfusWagnerResult tree = dreyfus_wagner(instance, terminals, max_terminals);
    OracleReport report;
    report.opt_value = tree.cost;
    report.certificate = tree.edges;
    report.search_space_size = 1LL << terminals.size();
    report.elapsed_ms = ms_since(start);
    return report;
}

OracleReport opt_krestricted_bruteforce(const SteinerInstance& instance, int k,
                                        int max_terminals) {
    const auto start = Clock::now();
    if (k < 2) throw ConfigError("k must be at least 2");
    std::vector<int> terminals(instance.terminals);
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    const int t = static_cast<int>(terminals.size());
    if (t > max_terminals)
        throw SizeLimit("k-restricted bruteforce over " + std::to_string(t) +
                        " terminals exceeds limit " + std::to_string(max_terminals));

    OracleReport report;
    if (t <= 1) {
        report.elapsed_ms = ms_since(start);
        return report;
    }

    struct Candidate {
        unsigned mask;
        double cost;
        std::vector<int> edges;
    };
    std::vector<Candidate> candidates;
    for (unsigned mask = 1; mask < (1u << t); ++mask) {
        int size = std::popcount(mask);
        if (size < 2 || size > k) continue;
        std::vector<int> subset;
        for (int i = 0; i < t; ++i)
            if (mask & (1u << i)) subset.push_back(terminals[i]);
        DreyfusWagnerResult tree = dreyfus_wagner(instance, subset, k);
        candidates.push_back({mask, tree.cost, tree.edges});
    }

    const int max_components = t - 1;
    double best = -1.0;
    std::vector<int> best_pick;
    std::vector<int> pick;
    long long nodes = 0;

    auto connected = [&]() {
        Disjoint uf(t);
        unsigned touched = 0;
        for (int ci : pick) {
            unsigned mask = candidates[ci].mask;
            touched |= mask;
            int first = std::countr_zero(mask);
            for (int i = first + 1; i < t; ++i)
                if (mask & (1u << i)) uf.unite(first, i);
        }
        if (touched != (1u << t) - 1) return false;
        for (int i = 1; i < t; ++i)
            if (uf.find(0) != uf.find(i)) return false;
        return true;
    };

    auto search = [&](auto&& self, int idx, double cost) -> void {
        ++nodes;
        if (connected()) {
            if (best < 0.0 || cost < best) {
                best = cost;
                best_pick = pick;
            }
            return;  // adding more components only costs more
        }
        if (idx == static_cast<int>(candidates.size())) return;
        if (static_cast<int>(pick.size()) == max_components) return;
        if (best >= 0.0 && cost >= best) return;
        for (int next = idx; next < static_cast<int>(candidates.size()); ++next) {
            pick.push_back(next);
            self(self, next + 1, cost + candidates[next].cost);
            pick.pop_back();
        }
    };
    search(search, 0, 0.0);

    if (best < 0.0) throw Disconnected("no k-component collection connects the terminals");
    report.opt_value = best;
    std::set<int> union_edges;
    for (int ci : best_pick)
        union_edges.insert(candidates[ci].edges.begin(), candidates[ci].edges.end());
    report.certificate.assign(union_edges.begin(), union_edges.end());
    report.search_space_size = nodes;
    report.elapsed_ms = ms_since(start);
    return report;
}

WtapSearchResult best_component_bruteforce_wtap(const WtapState& state, int size_cap,
                                                int max_links) {
    const WtapInstance& instance = *state.instance;
    const RootedTree& tree = instance.tree;
    const int m = static_cast<int>(instance.links.size());
    if (m > max_links)
        throw SizeLimit("component bruteforce over " + std::to_string(m) +
                        " links exceeds limit " + std::to_string(max_links));

    // Up-link data read from the state; all logic below is recomputed here.
    std::vector<int> uplink_ids;
    std::vector<std::vector<int>> uplink_edges;
    std::vector<double> uplink_wbar;
    for (const auto& [uid, u] : state.uplinks) {
        uplink_ids.push_back(uid);
        uplink_edges.push_back(walk_path_edges(tree, u.bottom, u.top));
        uplink_wbar.push_back(instance.links[u.owner].weight /
                              static_cast<double>(state.witness.at(u.owner).size()));
    }

    std::vector<int> best_component;
    double best_gain = 0.0;

    std::vector<char> covered(tree.edge_count(), 0);
    std::vector<int> load(tree.vertex_count, 0);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (std::popcount(mask) > size_cap) continue;
        std::fill(covered.begin(), covered.end(), 0);
        std::fill(load.begin(), load.end(), 0);
        std::vector<int> component;
        bool thin = true;
        double cost = 0.0;
        for (int i = 0; i < m && thin; ++i) {
            if (!(mask & (1u << i))) continue;
            component.push_back(i);
            cost += 1.5 * instance.links[i].weight;
            for (int v : walk_path_vertices(tree, instance.links[i].a, instance.links[i].b))
                if (++load[v] > state.k) thin = false;
            for (int e : walk_path_edges(tree, instance.links[i].a, instance.links[i].b))
                covered[e] = 1;
        }
        if (!thin) continue;
        double dropped = 0.0;
        for (std::size_t u = 0; u < uplink_ids.size(); ++u) {
            bool all = true;
            for (int e : uplink_edges[u])
                if (!covered[e]) {
                    all = false;
                    break;
                }
            if (all) dropped += uplink_wbar[u];
        }
        double g = dropped - cost;
        if (g > best_gain ||
            (g == best_gain &&
             std::lexicographical_compare(component.begin(), component.end(),
                                          best_component.begin(), best_component.end()))) {
            best_gain = g;
            best_component = component;
        }
    }
    return {best_component, best_gain};
}

std::pair<std::vector<TerminalPair>, double> drop_bruteforce_steiner(
    const SteinerState& state, const std::vector<int>& terminals_connected, int max_pairs) {
    const SteinerInstance& instance = *state.instance;
    std::vector<int> terminals(instance.terminals);

    // wbar recomputed here with the same canonical accumulation order.
    std::map<TerminalPair, double> wbar;
    for (const auto& [f, pairs] : state.witness) {
        double share = instance.edges[f].weight / static_cast<double>(pairs.size());
        for (const TerminalPair& p : pairs) wbar[p] += share;
    }
    std::vector<TerminalPair> s_pairs;
    for (const auto& [pair, value] : wbar) s_pairs.push_back(pair);
    const int s = static_cast<int>(s_pairs.size());
    if (s > max_pairs)
        throw SizeLimit("drop bruteforce over " + std::to_string(s) + " pairs exceeds limit " +
                        std::to_string(max_pairs));

    std::map<int, int> node;  // terminal -> contracted node index
    std::set<int> contracted(terminals_connected.begin(), terminals_connected.end());
    int next = 1;  // node 0 is the contracted blob
    for (int t : terminals) node[t] = contracted.count(t) ? 0 : next++;
    const int q = next;

    std::vector<TerminalPair> best_drop;
    double best_value = -1.0;
    for (unsigned mask = 0; mask < (1u << s); ++mask) {
        Disjoint uf(q);
        int kept = 0;
        bool tree = true;
        for (int i = 0; i < s && tree; ++i) {
            if (mask & (1u << i)) continue;  // dropped
            int a = node[s_pairs[i].first], b = node[s_pairs[i].second];
            if (a == b || !uf.unite(a, b))
                tree = false;  // self-loop or cycle in the contracted graph
            else
                ++kept;
        }
        if (!tree || kept != q - 1) continue;
        double value = 0.0;
        for (int i = 0; i < s; ++i)
            if (mask & (1u << i)) value += wbar[s_pairs[i]];
        if (value > best_value) {
            best_value = value;
            best_drop.clear();
            for (int i = 0; i < s; ++i)
                if (mask & (1u << i)) best_drop.push_back(s_pairs[i]);
        }
    }
    if (best_value < 0.0) throw Error("no valid drop set; S is not a terminal spanning tree");
    return {best_drop, best_value};
}

bool validate_wtap(const WtapInstance& instance, const std::vector<int>& link_ids) {
    std::vector<char> covered(instance.tree.edge_count(), 0);
    for (int id : link_ids) {
        const Link& link = instance.links.at(id);
        for (int e : walk_path_edges(instance.tree, link.a, link.b)) covered[e] = 1;
    }
    return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

bool validate_steiner(const SteinerInstance& instance, const std::vector<int>& edge_ids) {
    Disjoint uf(instance.vertex_count);
    for (int id : edge_ids) {
        const SteinerEdge& e = instance.edges.at(id);
        uf.unite(e.a, e.b);
    }
    for (std::size_t i = 1; i < instance.terminals.size(); ++i)
        if (uf.find(instance.terminals[0]) != uf.find(instance.terminals[i])) return false;
    return true;
}

}  // namespace treels
