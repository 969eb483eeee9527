#include "treels/steiner.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include "treels/errors.hpp"

namespace treels {

namespace {

constexpr double kInf = MetricClosure::kInf;

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
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

std::vector<int> sorted_unique(std::vector<int> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

// wbar over the pairs of the terminal tree, derived from a witness map.
std::map<TerminalPair, double> wbar_from_witness(
    const SteinerInstance& instance, const std::map<int, std::vector<TerminalPair>>& witness) {
    std::map<TerminalPair, double> acc;
    for (const auto& [f, pairs] : witness) {
        double share = instance.edges[f].weight / static_cast<double>(pairs.size());
        for (const TerminalPair& p : pairs) acc[p] += share;
    }
    return acc;
}

void insert_pair(std::vector<TerminalPair>& sorted, TerminalPair p) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), p);
    if (it == sorted.end() || *it != p) sorted.insert(it, p);
}

// Removes the pair from every witness set; edges left without witnesses leave F.
void erase_pair_everywhere(std::map<int, std::vector<TerminalPair>>& witness, TerminalPair p) {
    for (auto it = witness.begin(); it != witness.end();) {
        auto& pairs = it->second;
        auto pos = std::lower_bound(pairs.begin(), pairs.end(), p);
        if (pos != pairs.end() && *pos == p) pairs.erase(pos);
        if (pairs.empty())
            it = witness.erase(it);
        else
            ++it;
    }
}

// Any cycle in the graph (terminals, pairs), as the list of its pairs.
std::vector<TerminalPair> find_cycle(const std::vector<int>& terminals,
                                     const std::vector<TerminalPair>& pairs) {
    std::map<int, std::vector<int>> adj;  // terminal -> indices into pairs
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
        adj[pairs[i].first].push_back(i);
        adj[pairs[i].second].push_back(i);
    }
    std::map<int, int> parent_pair;  // terminal -> pair index used to reach it
    std::map<int, int> parent_vertex;
    std::set<int> visited;
    for (int start : terminals) {
        if (visited.count(start)) continue;
        std::vector<int> stack{start};
        parent_pair[start] = -1;
        parent_vertex[start] = -1;
        visited.insert(start);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int pi : adj[u]) {
                if (pi == parent_pair[u]) continue;
                int v = pairs[pi].first == u ? pairs[pi].second : pairs[pi].first;
                if (visited.count(v)) {
                    // Back edge: walk both endpoints up to their meeting point.
                    std::vector<TerminalPair> cycle{pairs[pi]};
                    std::set<int> on_u_path;
                    for (int x = u; x != -1; x = parent_vertex[x]) on_u_path.insert(x);
                    int meet = v;
                    while (!on_u_path.count(meet)) {
                        cycle.push_back(pairs[parent_pair[meet]]);
                        meet = parent_vertex[meet];
                    }
                    for (int x = u; x != meet; x = parent_vertex[x])
                        cycle.push_back(pairs[parent_pair[x]]);
                    return cycle;
                }
                visited.insert(v);
                parent_pair[v] = pi;
                parent_vertex[v] = u;
                stack.push_back(v);
            }
        }
    }
    return {};
}

}  // namespace

double harmonic(int q) {
    double h = 0.0;
    for (int i = 1; i <= q; ++i) h += 1.0 / static_cast<double>(i);
    return h;
}

std::vector<int> MetricClosure::path(int a, int b) const {
    int s = std::min(a, b), t = std::max(a, b);
    std::vector<int> sequence{s};
    int guard = instance->vertex_count + 1;
    int u = s;
    while (u != t) {
        if (--guard < 0) throw Error("shortest-path walk failed to make progress");
        double remaining = dist[u][t];
        double tol = 1e-9 * (1.0 + remaining);
        int next = -1;
        for (int v = 0; v < instance->vertex_count; ++v) {
            if (v == u || best_edge[u][v] < 0) continue;
            double w = instance->edges[best_edge[u][v]].weight;
            if (w + dist[v][t] <= remaining + tol) {
                next = v;
                break;  // vertices scanned ascending: first admissible is lex-smallest
            }
        }
        if (next < 0) throw Disconnected("no path between " + std::to_string(a) + " and " +
                                         std::to_string(b));
        sequence.push_back(next);
        u = next;
    }
    return sequence;
}

std::vector<int> MetricClosure::path_edge_ids(int a, int b) const {
    std::vector<int> vertices = path(a, b);
    std::vector<int> edges;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
        edges.push_back(best_edge[vertices[i]][vertices[i + 1]]);
    return edges;
}

MetricClosure metric_closure(const SteinerInstance& instance) {
    const int n = instance.vertex_count;
    MetricClosure closure;
    closure.instance = &instance;
    closure.dist.assign(n, std::vector<double>(n, kInf));
    closure.best_edge.assign(n, std::vector<int>(n, -1));
    for (int v = 0; v < n; ++v) closure.dist[v][v] = 0.0;
    for (const SteinerEdge& e : instance.edges) {
        int& slot = closure.best_edge[e.a][e.b];
        if (slot < 0 || e.weight < instance.edges[slot].weight) {
            slot = e.id;
            closure.best_edge[e.b][e.a] = e.id;
        }
        double w = instance.edges[closure.best_edge[e.a][e.b]].weight;
        if (w < closure.dist[e.a][e.b]) {
            closure.dist[e.a][e.b] = w;
            closure.dist[e.b][e.a] = w;
        }
    }
    for (int k = 0; k < n; ++k)
        for (int u = 0; u < n; ++u) {
            if (closure.dist[u][k] >= kInf) continue;
            for (int v = 0; v < n; ++v) {
                double through = closure.dist[u][k] + closure.dist[k][v];
                if (through < closure.dist[u][v]) closure.dist[u][v] = through;
            }
        }
    for (std::size_t i = 0; i < instance.terminals.size(); ++i)
        for (std::size_t j = i + 1; j < instance.terminals.size(); ++j)
            if (closure.dist[instance.terminals[i]][instance.terminals[j]] >= kInf)
                throw Disconnected("terminals " + std::to_string(instance.terminals[i]) + " and " +
                                   std::to_string(instance.terminals[j]) + " are not connected");
    return closure;
}

DreyfusWagnerResult dreyfus_wagner(const SteinerInstance& instance, const std::vector<int>& subset,
                                   int size_limit) {
    std::vector<int> targets = sorted_unique(subset);
    for (int v : targets)
        if (v < 0 || v >= instance.vertex_count)
            throw BadVertex("subset vertex " + std::to_string(v) + " out of range");
    const int t = static_cast<int>(targets.size());
    if (t > size_limit)
        throw SizeLimit("dreyfus_wagner subset size " + std::to_string(t) + " exceeds limit " +
                        std::to_string(size_limit));
    if (t <= 1) return {{}, 0.0};

    MetricClosure closure = metric_closure(instance);
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            if (closure.dist[targets[i]][targets[j]] >= kInf)
                throw Disconnected("subset vertices are not connected");

    const int n = instance.vertex_count;
    const int full = (1 << t) - 1;
    // dp[mask][v]: min cost tree connecting targets(mask) plus vertex v.
    std::vector<std::vector<double>> dp(full + 1, std::vector<double>(n, kInf));
    std::vector<std::vector<double>> inner(full + 1, std::vector<double>(n, kInf));
    std::vector<std::vector<int>> dp_from(full + 1, std::vector<int>(n, -1));      // argmin u
    std::vector<std::vector<int>> inner_split(full + 1, std::vector<int>(n, 0));
    for (int i = 0; i < t; ++i)
        for (int v = 0; v < n; ++v) dp[1 << i][v] = closure.dist[targets[i]][v];

    for (int mask = 1; mask <= full; ++mask) {
        if ((mask & (mask - 1)) == 0) continue;  // singletons are the base case
        for (int v = 0; v < n; ++v) {
            for (int s = (mask - 1) & mask; s > 0; s = (s - 1) & mask) {
                if (dp[s][v] >= kInf || dp[mask ^ s][v] >= kInf) continue;
                double c = dp[s][v] + dp[mask ^ s][v];
                if (c < inner[mask][v]) {
                    inner[mask][v] = c;
                    inner_split[mask][v] = s;
                }
            }
        }
        for (int v = 0; v < n; ++v) {
            for (int u = 0; u < n; ++u) {
                if (inner[mask][u] >= kInf || closure.dist[u][v] >= kInf) continue;
                double c = inner[mask][u] + closure.dist[u][v];
                if (c < dp[mask][v]) {
                    dp[mask][v] = c;
                    dp_from[mask][v] = u;
                }
            }
        }
    }

    std::set<int> edge_set;
    auto add_walk = [&](int a, int b) {
        for (int e : closure.path_edge_ids(a, b)) edge_set.insert(e);
    };
    // Recover the tree for (mask, v) following the recorded decisions.
    auto emit = [&](auto&& self, int mask, int v) -> void {
        if ((mask & (mask - 1)) == 0) {
            int terminal = targets[std::countr_zero(static_cast<unsigned>(mask))];
            if (terminal != v) add_walk(terminal, v);
            return;
        }
        int u = dp_from[mask][v];
        if (u != v) add_walk(u, v);
        int s = inner_split[mask][u];
        self(self, s, u);
        self(self, mask ^ s, u);
    };
    emit(emit, full, targets[0]);

    DreyfusWagnerResult result;
    result.cost = dp[full][targets[0]];
    result.edges.assign(edge_set.begin(), edge_set.end());

    double realized = 0.0;
    for (int e : result.edges) realized += instance.edges[e].weight;
    if (std::abs(realized - result.cost) > 1e-9 * (1.0 + result.cost))
        throw Error("dreyfus_wagner reconstruction does not match the computed cost");
    UnionFind uf(n);
    int merges = 0;
    for (int e : result.edges) {
        if (!uf.unite(instance.edges[e].a, instance.edges[e].b))
            throw Error("dreyfus_wagner reconstruction contains a cycle");
        ++merges;
    }
    (void)merges;
    return result;
}

SteinerState initial_steiner_state(const SteinerInstance& instance, double epsilon, int k) {
    SteinerState state;
    state.instance = &instance;
    state.epsilon = epsilon;
    state.k = k;

    std::vector<int> terminals = sorted_unique(instance.terminals);
    if (terminals.size() <= 1) return state;

    MetricClosure closure = metric_closure(instance);

    // Terminal MST over the metric closure, ties by pair.
    struct ClosurePair {
        double dist;
        TerminalPair pair;
    };
    std::vector<ClosurePair> candidates;
    for (std::size_t i = 0; i < terminals.size(); ++i)
        for (std::size_t j = i + 1; j < terminals.size(); ++j)
            candidates.push_back(
                {closure.dist[terminals[i]][terminals[j]], {terminals[i], terminals[j]}});
    std::sort(candidates.begin(), candidates.end(), [](const ClosurePair& a, const ClosurePair& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.pair < b.pair;
    });
    std::map<int, int> index;
    for (std::size_t i = 0; i < terminals.size(); ++i) index[terminals[i]] = static_cast<int>(i);
    UnionFind uf(static_cast<int>(terminals.size()));
    std::vector<TerminalPair> mst;
    for (const ClosurePair& c : candidates)
        if (uf.unite(index[c.pair.first], index[c.pair.second])) mst.push_back(c.pair);
    std::sort(mst.begin(), mst.end());

    for (const TerminalPair& pair : mst)
        for (int e : closure.path_edge_ids(pair.first, pair.second))
            insert_pair(state.witness[e], pair);

    // If the union of witness sets is not itself a terminal spanning tree,
    // remove max-wbar pairs from cycles until it is. The MST start never
    // triggers this; it guards degenerate hand-built inputs.
    while (true) {
        std::set<TerminalPair> s_pairs;
        for (const auto& [f, pairs] : state.witness) s_pairs.insert(pairs.begin(), pairs.end());
        std::vector<TerminalPair> cycle =
            find_cycle(terminals, {s_pairs.begin(), s_pairs.end()});
        if (cycle.empty()) break;
        std::map<TerminalPair, double> wbar = wbar_from_witness(instance, state.witness);
        TerminalPair victim = cycle.front();
        for (const TerminalPair& p : cycle)
            if (wbar[p] > wbar[victim] || (wbar[p] == wbar[victim] && p < victim)) victim = p;
        erase_pair_everywhere(state.witness, victim);
    }
    return state;
}

std::map<TerminalPair, double> terminal_tree_wbar(const SteinerState& state) {
    return wbar_from_witness(*state.instance, state.witness);
}

SteinerComponent witness_tree_for_component(const SteinerInstance& instance,
                                            const std::vector<int>& component_edges,
                                            const std::vector<int>& terminals_connected,
                                            int size_limit) {
    std::vector<int> edges = sorted_unique(component_edges);
    std::vector<int> terminals = sorted_unique(terminals_connected);
    const int t = static_cast<int>(terminals.size());
    if (t < 2) throw Error("witness tree needs at least two connected terminals");
    if (t > size_limit)
        throw SizeLimit("witness-tree enumeration over " + std::to_string(t) +
                        " terminals exceeds limit " + std::to_string(size_limit));

    // Component adjacency; the edge set must be a tree touching all terminals.
    std::map<int, std::vector<std::pair<int, int>>> adj;  // vertex -> (neighbor, edge position)
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        const SteinerEdge& e = instance.edges[edges[i]];
        adj[e.a].push_back({e.b, i});
        adj[e.b].push_back({e.a, i});
    }
    if (adj.size() != edges.size() + 1) throw Error("component edges do not form a tree");

    // Unique path between terminal pairs inside the component.
    auto path_positions = [&](int from, int to) {
        std::map<int, std::pair<int, int>> via;  // vertex -> (previous vertex, edge position)
        std::vector<int> stack{from};
        via[from] = {-1, -1};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (u == to) break;
            for (auto [v, pos] : adj[u])
                if (!via.count(v)) {
                    via[v] = {u, pos};
                    stack.push_back(v);
                }
        }
        if (!via.count(to)) throw Error("component does not connect its terminals");
        std::vector<int> positions;
        for (int v = to; via[v].first != -1; v = via[v].first) positions.push_back(via[v].second);
        return positions;
    };
    std::vector<std::vector<std::vector<int>>> pair_path(t, std::vector<std::vector<int>>(t));
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) pair_path[i][j] = path_positions(terminals[i], terminals[j]);

    std::vector<double> weights(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) weights[i] = instance.edges[edges[i]].weight;

    // Evaluate one candidate tree given as index pairs (i < j).
    std::vector<int> count(edges.size());
    auto evaluate = [&](const std::vector<std::pair<int, int>>& tree_pairs) {
        std::fill(count.begin(), count.end(), 0);
        for (auto [i, j] : tree_pairs)
            for (int pos : pair_path[i][j]) ++count[pos];
        double phi = 0.0;
        for (std::size_t pos = 0; pos < edges.size(); ++pos) {
            if (count[pos] == 0) throw Error("component edge separates no terminals");
            phi += harmonic(count[pos]) * weights[pos];
        }
        return phi;
    };

    double best_phi = kInf;
    std::vector<std::pair<int, int>> best_tree;
    auto consider = [&](std::vector<std::pair<int, int>> tree_pairs) {
        for (auto& [i, j] : tree_pairs)
            if (i > j) std::swap(i, j);
        std::sort(tree_pairs.begin(), tree_pairs.end());
        double phi = evaluate(tree_pairs);
        if (phi < best_phi || (phi == best_phi && tree_pairs < best_tree)) {
            best_phi = phi;
            best_tree = std::move(tree_pairs);
        }
    };

    if (t == 2) {
        consider({{0, 1}});
    } else {
        // All labeled spanning trees on the terminals via Prufer sequences.
        std::vector<int> seq(t - 2, 0);
        while (true) {
            std::vector<int> degree(t, 1);
            for (int s : seq) ++degree[s];
            std::vector<std::pair<int, int>> tree_pairs;
            std::vector<int> deg = degree;
            for (int s : seq) {
                int leaf = 0;
                while (deg[leaf] != 1) ++leaf;
                tree_pairs.push_back({leaf, s});
                deg[leaf] = 0;
                --deg[s];
            }
            int a = -1, b = -1;
            for (int i = 0; i < t; ++i)
                if (deg[i] == 1) (a < 0 ? a : b) = i;
            tree_pairs.push_back({a, b});
            consider(std::move(tree_pairs));

            int pos = t - 3;
            while (pos >= 0 && seq[pos] == t - 1) seq[pos--] = 0;
            if (pos < 0) break;
            ++seq[pos];
        }
    }

    SteinerComponent component;
    component.edges = edges;
    component.terminals = terminals;
    for (auto [i, j] : best_tree) {
        TerminalPair pair = make_pair_sorted(terminals[i], terminals[j]);
        component.witness_tree.push_back(pair);
        for (int pos : pair_path[i][j]) insert_pair(component.witness[edges[pos]], pair);
    }
    std::sort(component.witness_tree.begin(), component.witness_tree.end());
    component.potential = best_phi;
    return component;
}

std::vector<TerminalPair> drop_s(const SteinerState& state,
                                 const std::vector<int>& terminals_connected) {
    const std::vector<int>& terminals = state.instance->terminals;
    std::vector<int> contracted = sorted_unique(terminals_connected);
    if (contracted.size() < 2) throw Error("drop_s needs at least two terminals");
    for (int v : contracted)
        if (!std::binary_search(terminals.begin(), terminals.end(), v))
            throw BadVertex("vertex " + std::to_string(v) + " is not a terminal");

    std::map<int, int> index;
    for (std::size_t i = 0; i < terminals.size(); ++i) index[terminals[i]] = static_cast<int>(i);
    UnionFind uf(static_cast<int>(terminals.size()));
    for (std::size_t i = 1; i < contracted.size(); ++i)
        uf.unite(index[contracted[0]], index[contracted[i]]);

    std::map<TerminalPair, double> wbar = terminal_tree_wbar(state);
    std::vector<std::pair<double, TerminalPair>> order;
    for (const auto& [pair, value] : wbar) order.push_back({value, pair});
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });

    std::vector<TerminalPair> dropped;
    for (const auto& [value, pair] : order)
        if (!uf.unite(index[pair.first], index[pair.second])) dropped.push_back(pair);
    std::sort(dropped.begin(), dropped.end());
    return dropped;
}

double gain_steiner(const SteinerState& state, const SteinerComponent& component) {
    std::map<TerminalPair, double> wbar = terminal_tree_wbar(state);
    double dropped = 0.0;
    for (const TerminalPair& pair : drop_s(state, component.terminals)) dropped += wbar.at(pair);
    double cost = 0.0;
    for (int e : component.edges) cost += state.instance->edges[e].weight;
    return dropped - kLn4 * cost;
}

std::optional<std::pair<SteinerComponent, double>> best_k_component(const SteinerState& state,
                                                                    const SteinerLimits& limits) {
    const SteinerInstance& instance = *state.instance;
    const std::vector<int>& terminals = instance.terminals;
    const int t = static_cast<int>(terminals.size());

    std::optional<std::pair<SteinerComponent, double>> best;
    double best_gain = 0.0;

    std::vector<int> pick;
    auto try_subset = [&](const std::vector<int>& subset) {
        DreyfusWagnerResult tree = dreyfus_wagner(instance, subset, limits.dw_subset_limit);
        if (tree.edges.empty()) return;
        // The cheapest tree may pass through terminals beyond the subset.
        std::vector<int> touched;
        for (int e : tree.edges) {
            const SteinerEdge& edge = instance.edges[e];
            if (std::binary_search(terminals.begin(), terminals.end(), edge.a))
                touched.push_back(edge.a);
            if (std::binary_search(terminals.begin(), terminals.end(), edge.b))
                touched.push_back(edge.b);
        }
        SteinerComponent component = witness_tree_for_component(
            instance, tree.edges, sorted_unique(touched), limits.witness_terminal_limit);
        double g = gain_steiner(state, component);
        if (g > best_gain) {
            best_gain = g;
            best = {std::move(component), g};
        }
    };
    auto enumerate = [&](auto&& self, int start, int remaining) -> void {
        if (remaining == 0) {
            try_subset(pick);
            return;
        }
        for (int i = start; i <= t - remaining; ++i) {
            pick.push_back(terminals[i]);
            self(self, i + 1, remaining - 1);
            pick.pop_back();
        }
    };
    for (int size = 2; size <= std::min(state.k, t); ++size) enumerate(enumerate, 0, size);
    return best;
}

void apply_component_steiner(SteinerState& state, const SteinerComponent& component) {
    for (const TerminalPair& pair : drop_s(state, component.terminals))
        erase_pair_everywhere(state.witness, pair);
    for (const auto& [edge, pairs] : component.witness) {
        auto& merged = state.witness[edge];
        for (const TerminalPair& p : pairs) insert_pair(merged, p);
    }
}

double steiner_solution_weight(const SteinerState& state) {
    double total = 0.0;
    for (const auto& [f, pairs] : state.witness) total += state.instance->edges[f].weight;
    return total;
}

double steiner_potential(const SteinerState& state) {
    double total = 0.0;
    for (const auto& [f, pairs] : state.witness)
        total += harmonic(static_cast<int>(pairs.size())) * state.instance->edges[f].weight;
    return total;
}

SteinerResult run_steiner(const SteinerInstance& instance, double epsilon, int k,
                          const SteinerLimits& limits) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw ConfigError("steiner epsilon must lie in (0, 1]");
    if (k < 2) throw ConfigError("k must be at least 2");

    SteinerResult result;
    std::vector<int> terminals = sorted_unique(instance.terminals);
    if (terminals.empty()) throw ConfigError("instance has no terminals");
    if (terminals.size() == 1) return result;

    SteinerState state = initial_steiner_state(instance, epsilon, k);

    const double h_n = harmonic(instance.vertex_count);
    const double factor =
        1.0 - epsilon / (2.0 * h_n * kLn4 * static_cast<double>(terminals.size()));
    const auto run_start = std::chrono::steady_clock::now();
    int iteration = 0;
    while (true) {
        if (limits.time_budget_s > 0.0) {
            std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - run_start;
            if (elapsed.count() > limits.time_budget_s) {
                result.time_budget_hit = true;
                break;
            }
        }
        const auto iter_start = std::chrono::steady_clock::now();
        auto found = best_k_component(state, limits);
        if (!found) break;

        double phi_before = steiner_potential(state);
        std::map<TerminalPair, double> wbar = terminal_tree_wbar(state);
        double drop_weight = 0.0;
        for (const TerminalPair& pair : drop_s(state, found->first.terminals))
            drop_weight += wbar.at(pair);

        SteinerState snapshot = state;
        apply_component_steiner(state, found->first);
        double phi_after = steiner_potential(state);
        if (phi_after > factor * phi_before) {
            state = std::move(snapshot);
            break;
        }

        ++iteration;
        TraceRow row;
        row.iteration = iteration;
        row.potential_before = phi_before;
        row.potential_after = phi_after;
        row.solution_weight = steiner_solution_weight(state);
        row.component_size = static_cast<int>(found->first.edges.size());
        row.drop_wbar = drop_weight;
        double component_weight = 0.0;
        for (int e : found->first.edges) component_weight += instance.edges[e].weight;
        row.component_weight = component_weight;
        row.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                      iter_start)
                .count();
        result.trace.push_back(row);
    }

    for (const auto& [f, pairs] : state.witness) result.solution.push_back(f);
    result.weight = steiner_solution_weight(state);
    result.potential = steiner_potential(state);
    return result;
}

long long choose_k(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw ConfigError("steiner epsilon must lie in (0, 1]");
    double exponent = std::ceil(2.0 * kLn4 / epsilon);
    if (exponent >= 63.0) return std::numeric_limits<long long>::max();
    return 1LL << static_cast<long long>(exponent);
}

std::optional<std::string> steiner_state_violation(const SteinerState& state) {
    const SteinerInstance& instance = *state.instance;
    std::vector<int> terminals = sorted_unique(instance.terminals);

    std::set<TerminalPair> s_pairs;
    for (const auto& [f, pairs] : state.witness) {
        if (pairs.empty()) return "edge " + std::to_string(f) + " has an empty witness set";
        if (!std::is_sorted(pairs.begin(), pairs.end())) return "witness set not sorted";
        for (const TerminalPair& p : pairs) {
            if (p.first >= p.second) return "witness pair not normalized";
            if (!std::binary_search(terminals.begin(), terminals.end(), p.first) ||
                !std::binary_search(terminals.begin(), terminals.end(), p.second))
                return "witness pair endpoint is not a terminal";
            s_pairs.insert(p);
        }
    }

    // (T, S) must be a spanning tree on the terminals.
    if (terminals.size() >= 1 && s_pairs.size() != terminals.size() - 1)
        return "terminal tree has " + std::to_string(s_pairs.size()) + " pairs, expected " +
               std::to_string(terminals.size() - 1);
    std::map<int, int> index;
    for (std::size_t i = 0; i < terminals.size(); ++i) index[terminals[i]] = static_cast<int>(i);
    UnionFind uf(static_cast<int>(terminals.size()));
    for (const TerminalPair& p : s_pairs)
        if (!uf.unite(index[p.first], index[p.second])) return "terminal tree contains a cycle";

    // Path-witness property: the edges holding pair e form a connected route
    // between its endpoints.
    for (const TerminalPair& pair : s_pairs) {
        UnionFind connect(instance.vertex_count);
        for (const auto& [f, pairs] : state.witness)
            if (std::binary_search(pairs.begin(), pairs.end(), pair))
                connect.unite(instance.edges[f].a, instance.edges[f].b);
        if (connect.find(pair.first) != connect.find(pair.second))
            return "witness edges of a terminal pair do not connect its endpoints";
    }

    // F connects all terminals.
    UnionFind feasible(instance.vertex_count);
    for (const auto& [f, pairs] : state.witness)
        feasible.unite(instance.edges[f].a, instance.edges[f].b);
    for (std::size_t i = 1; i < terminals.size(); ++i)
        if (feasible.find(terminals[0]) != feasible.find(terminals[i]))
            return "solution does not connect all terminals";

    double weight = steiner_solution_weight(state);
    double total_wbar = 0.0;
    for (const auto& [pair, value] : terminal_tree_wbar(state)) total_wbar += value;
    if (std::abs(total_wbar - weight) > 1e-9 * std::max(1.0, weight))
        return "wbar(S) != w(F)";
    double phi = steiner_potential(state);
    double h_n = harmonic(instance.vertex_count);
    if (phi < weight - 1e-9 * std::max(1.0, weight) || phi > h_n * weight + 1e-9 * std::max(1.0, weight))
        return "potential outside [w(F), H_n w(F)]";
    return std::nullopt;
}

}  // namespace treels
