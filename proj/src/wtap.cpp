#include "treels/wtap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include "treels/errors.hpp"

namespace treels {

namespace {

// Edges on the vertical path bottom..top, ordered from bottom upwards.
std::vector<int> uplink_path(const RootedTree& tree, int bottom, int top) {
    std::vector<int> edges;
    int v = bottom;
    while (v != top) {
        edges.push_back(tree.up_edge[v]);
        v = tree.parent[v];
    }
    return edges;
}

std::vector<VertexPair> solution_pairs(const WtapState& state) {
    std::vector<VertexPair> pairs;
    pairs.reserve(state.witness.size());
    for (const auto& [id, w] : state.witness) {
        const Link& link = state.instance->links[id];
        pairs.push_back({link.a, link.b});
    }
    return pairs;
}

std::vector<VertexPair> uplink_pairs(const WtapState& state) {
    std::vector<VertexPair> pairs;
    pairs.reserve(state.uplinks.size());
    for (const auto& [id, u] : state.uplinks) pairs.push_back({u.bottom, u.top});
    return pairs;
}

void insert_link_with_fresh_witness(WtapState& state, int link_id) {
    const Link& link = state.instance->links[link_id];
    std::vector<int> ids;
    for (const VertexPair& pair : split_to_uplinks(state.instance->tree, link)) {
        const RootedTree& tree = state.instance->tree;
        int bottom = pair.first, top = pair.second;
        if (tree.depth[bottom] < tree.depth[top]) std::swap(bottom, top);
        int uid = state.next_uplink_id++;
        state.uplinks[uid] = WitnessUplink{bottom, top, link_id};
        ids.push_back(uid);
    }
    state.witness[link_id] = std::move(ids);
}

}  // namespace

WtapInstance shadow_close(const WtapInstance& instance, std::size_t cap) {
    const RootedTree& tree = instance.tree;

    // Minimum generator weight per pair; original pairs participate too.
    std::map<VertexPair, double> best;
    std::set<VertexPair> original;
    for (const Link& link : instance.links) {
        VertexPair key{std::min(link.a, link.b), std::max(link.a, link.b)};
        original.insert(key);
        std::vector<int> vertices = path_vertices(tree, {link.a, link.b});
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            for (std::size_t j = i + 1; j < vertices.size(); ++j) {
                VertexPair p{std::min(vertices[i], vertices[j]),
                             std::max(vertices[i], vertices[j])};
                auto it = best.find(p);
                if (it == best.end())
                    best[p] = link.weight;
                else if (link.weight < it->second)
                    it->second = link.weight;
                if (best.size() > cap)
                    throw SizeLimit("shadow closure exceeds cap of " + std::to_string(cap) +
                                    " links");
            }
        }
    }

    WtapInstance closed;
    closed.tree = tree;
    closed.shadow_closed = true;
    closed.links = instance.links;
    for (Link& link : closed.links) {
        VertexPair key{std::min(link.a, link.b), std::max(link.a, link.b)};
        link.weight = best.at(key);
    }
    for (const auto& [pair, weight] : best) {
        if (original.count(pair)) continue;
        Link link;
        link.id = static_cast<int>(closed.links.size());
        link.a = pair.first;
        link.b = pair.second;
        link.weight = weight;
        closed.links.push_back(link);
    }
    return closed;
}

std::vector<VertexPair> split_to_uplinks(const RootedTree& tree, const Link& link) {
    int top = apex(tree, {link.a, link.b});
    if (top == link.a || top == link.b) return {{link.a, link.b}};
    return {{link.a, top}, {link.b, top}};
}

std::vector<int> initial_wtap_solution(const WtapInstance& instance) {
    if (!is_cover(instance.tree, std::span<const Link>(instance.links)))
        throw Infeasible("full link set does not cover the tree");

    std::vector<int> order(instance.links.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (instance.links[a].weight != instance.links[b].weight)
            return instance.links[a].weight > instance.links[b].weight;
        return a < b;
    });

    // cover_count[e] = number of kept links covering edge e
    std::vector<int> cover_count(instance.tree.edge_count(), 0);
    std::vector<char> kept(instance.links.size(), 1);
    std::vector<std::vector<int>> link_path(instance.links.size());
    for (std::size_t i = 0; i < instance.links.size(); ++i) {
        link_path[i] = path_edges(instance.tree, {instance.links[i].a, instance.links[i].b});
        for (int e : link_path[i]) ++cover_count[e];
    }
    for (int id : order) {
        bool removable = true;
        for (int e : link_path[id])
            if (cover_count[e] == 1) {
                removable = false;
                break;
            }
        if (removable) {
            kept[id] = 0;
            for (int e : link_path[id]) --cover_count[e];
        }
    }

    std::vector<int> result;
    for (std::size_t i = 0; i < instance.links.size(); ++i)
        if (kept[i]) result.push_back(static_cast<int>(i));
    return result;
}

WtapState init_state(const WtapInstance& instance, const std::vector<int>& initial_solution,
                     double epsilon, int k) {
    std::vector<VertexPair> pairs;
    for (int id : initial_solution) {
        const Link& link = instance.links.at(id);
        pairs.push_back({link.a, link.b});
    }
    if (!is_cover(instance.tree, pairs))
        throw InfeasibleStart("initial solution is not a WTAP cover");

    WtapState state;
    state.instance = &instance;
    state.epsilon = epsilon;
    state.k = k;
    std::vector<int> sorted(initial_solution);
    std::sort(sorted.begin(), sorted.end());
    for (int id : sorted) insert_link_with_fresh_witness(state, id);
    shorten_uplinks(state);
    return state;
}

void shorten_uplinks(WtapState& state) {
    const RootedTree& tree = state.instance->tree;
    std::vector<int> cover_count(tree.edge_count(), 0);
    for (const auto& [uid, u] : state.uplinks)
        for (int e : uplink_path(tree, u.bottom, u.top)) ++cover_count[e];

    // Phase 1: delete up-links that are redundant against the current U.
    std::vector<int> ids;
    for (const auto& [uid, u] : state.uplinks) ids.push_back(uid);
    for (int uid : ids) {
        const WitnessUplink& u = state.uplinks.at(uid);
        std::vector<int> path = uplink_path(tree, u.bottom, u.top);
        bool redundant = true;
        for (int e : path)
            if (cover_count[e] < 2) {
                redundant = false;
                break;
            }
        if (!redundant) continue;
        for (int e : path) --cover_count[e];
        auto& owner_witness = state.witness.at(u.owner);
        owner_witness.erase(std::find(owner_witness.begin(), owner_witness.end(), uid));
        state.uplinks.erase(uid);
    }

    // Phase 2: shorten every survivor to the span of its uniquely covered
    // edges. One pass leaves the paths P_u pairwise disjoint.
    for (auto& [uid, u] : state.uplinks) {
        std::vector<int> chain;  // vertices bottom..top
        for (int v = u.bottom; v != u.top; v = tree.parent[v]) chain.push_back(v);
        chain.push_back(u.top);
        int lo = -1, hi = -1;  // chain indices of deepest/shallowest unique edge
        for (int i = 0; i + 1 < static_cast<int>(chain.size()); ++i) {
            if (cover_count[tree.up_edge[chain[i]]] == 1) {
                if (lo < 0) lo = i;
                hi = i;
            }
        }
        if (lo < 0) continue;  // cannot happen after phase 1; keep as-is
        for (int i = 0; i + 1 < static_cast<int>(chain.size()); ++i)
            if (i < lo || i > hi) --cover_count[tree.up_edge[chain[i]]];
        u.bottom = chain[lo];
        u.top = chain[hi + 1];
    }

    // Links whose witness sets emptied leave the solution.
    for (auto it = state.witness.begin(); it != state.witness.end();) {
        if (it->second.empty())
            it = state.witness.erase(it);
        else
            ++it;
    }
}

std::vector<int> drop_u(const WtapState& state, const std::vector<int>& component) {
    const RootedTree& tree = state.instance->tree;
    std::vector<char> covered(tree.edge_count(), 0);
    for (int id : component) {
        const Link& link = state.instance->links.at(id);
        for (int e : path_edges(tree, {link.a, link.b})) covered[e] = 1;
    }
    std::vector<int> dropped;
    for (const auto& [uid, u] : state.uplinks) {
        bool all = true;
        for (int e : uplink_path(tree, u.bottom, u.top))
            if (!covered[e]) {
                all = false;
                break;
            }
        if (all) dropped.push_back(uid);
    }
    return dropped;
}

double wbar(const WtapState& state, int uplink_id) {
    const WitnessUplink& u = state.uplinks.at(uplink_id);
    const Link& owner = state.instance->links[u.owner];
    return owner.weight / static_cast<double>(state.witness.at(u.owner).size());
}

double wbar_total(const WtapState& state) {
    double total = 0.0;
    for (const auto& [uid, u] : state.uplinks) total += wbar(state, uid);
    return total;
}

double solution_weight(const WtapState& state) {
    double total = 0.0;
    for (const auto& [id, w] : state.witness) total += state.instance->links[id].weight;
    return total;
}

double potential_wtap(const WtapState& state) {
    double total = 0.0;
    for (const auto& [id, w] : state.witness) {
        double weight = state.instance->links[id].weight;
        total += (w.size() == 1) ? weight : 1.5 * weight;
    }
    return total;
}

double gain(const WtapState& state, const std::vector<int>& component) {
    double dropped = 0.0;
    for (int uid : drop_u(state, component)) dropped += wbar(state, uid);
    std::vector<int> sorted(component);
    std::sort(sorted.begin(), sorted.end());
    double cost = 0.0;
    for (int id : sorted) cost += 1.5 * state.instance->links.at(id).weight;
    return dropped - cost;
}

bool is_k_thin(const RootedTree& tree, std::span<const Link> component, int k) {
    std::vector<int> load(tree.vertex_count, 0);
    for (const Link& link : component)
        for (int v : path_vertices(tree, {link.a, link.b}))
            if (++load[v] > k) return false;
    return true;
}

bool is_k_thin(const WtapInstance& instance, const std::vector<int>& component, int k) {
    std::vector<Link> links;
    for (int id : component) links.push_back(instance.links.at(id));
    return is_k_thin(instance.tree, links, k);
}

namespace {

// Immutable per-search tables for the branch and bound.
struct SearchContext {
    const WtapInstance* instance = nullptr;
    int k = 0;
    int size_cap = 0;
    long long node_budget = 0;
    long long nodes = 0;

    std::vector<std::vector<int>> link_path;      // per link: edge ids
    std::vector<std::vector<int>> link_vertices;  // per link: path vertices
    std::vector<int> uplink_ids;                  // ascending
    std::vector<double> uplink_wbar;              // by position
    std::vector<std::vector<int>> edge_uplinks;   // edge -> positions of up-links using it
    std::vector<int> missing_init;                // per up-link: path length
    std::vector<int> last_intersecting;           // per up-link: max link id sharing an edge

    // Mutable search state
    std::vector<int> cover_count;   // per edge
    std::vector<int> load;          // per vertex
    std::vector<int> missing;       // per up-link
    std::vector<char> dropped;      // per up-link
    std::vector<int> chosen;
    double cur_gain = 0.0;

    std::vector<int> best_component;
    double best_gain = 0.0;
};

// Upper bound for extensions using links with id >= idx: every not-yet-dropped
// up-link whose path meets some remaining link path may still be dropped.
double extension_bound(const SearchContext& ctx, int idx) {
    double pending = 0.0;
    for (std::size_t i = 0; i < ctx.uplink_ids.size(); ++i)
        if (!ctx.dropped[i] && ctx.last_intersecting[i] >= idx) pending += ctx.uplink_wbar[i];
    return ctx.cur_gain + pending;
}

void search(SearchContext& ctx, int start_idx) {
    if (ctx.cur_gain > ctx.best_gain) {  // strict: first maximizer is lex-smallest
        ctx.best_gain = ctx.cur_gain;
        ctx.best_component = ctx.chosen;
    }
    if (static_cast<int>(ctx.chosen.size()) == ctx.size_cap) return;

    const int link_count = static_cast<int>(ctx.instance->links.size());
    for (int idx = start_idx; idx < link_count; ++idx) {
        // The bound is nonincreasing in idx, so one failure ends the loop.
        if (extension_bound(ctx, idx) <= ctx.best_gain) return;

        if (++ctx.nodes > ctx.node_budget)
            throw Timeout("component search exceeded node budget of " +
                          std::to_string(ctx.node_budget));

        // k-thinness is monotone: skip the link if it overloads a vertex.
        bool thin = true;
        for (int v : ctx.link_vertices[idx]) {
            if (++ctx.load[v] > ctx.k) thin = false;
        }
        if (!thin) {
            for (int v : ctx.link_vertices[idx]) --ctx.load[v];
            continue;
        }

        std::vector<int> newly_dropped;
        for (int e : ctx.link_path[idx]) {
            if (ctx.cover_count[e]++ == 0) {
                for (int upos : ctx.edge_uplinks[e]) {
                    if (--ctx.missing[upos] == 0) {
                        ctx.dropped[upos] = 1;
                        ctx.cur_gain += ctx.uplink_wbar[upos];
                        newly_dropped.push_back(upos);
                    }
                }
            }
        }
        ctx.cur_gain -= 1.5 * ctx.instance->links[idx].weight;
        ctx.chosen.push_back(idx);

        search(ctx, idx + 1);

        ctx.chosen.pop_back();
        ctx.cur_gain += 1.5 * ctx.instance->links[idx].weight;
        for (int upos : newly_dropped) {
            ctx.dropped[upos] = 0;
            ctx.cur_gain -= ctx.uplink_wbar[upos];
        }
        for (int e : ctx.link_path[idx]) {
            if (--ctx.cover_count[e] == 0)
                for (int upos : ctx.edge_uplinks[e]) ++ctx.missing[upos];
        }
        for (int v : ctx.link_vertices[idx]) --ctx.load[v];
    }
}

}  // namespace

WtapSearchResult best_component_exact(const WtapState& state, int size_cap,
                                      long long node_budget) {
    const WtapInstance& instance = *state.instance;
    const RootedTree& tree = instance.tree;

    SearchContext ctx;
    ctx.instance = &instance;
    ctx.k = state.k;
    ctx.size_cap = size_cap;
    ctx.node_budget = node_budget;

    const int m = static_cast<int>(instance.links.size());
    ctx.link_path.resize(m);
    ctx.link_vertices.resize(m);
    for (int i = 0; i < m; ++i) {
        ctx.link_path[i] = path_edges(tree, {instance.links[i].a, instance.links[i].b});
        ctx.link_vertices[i] = path_vertices(tree, {instance.links[i].a, instance.links[i].b});
    }

    ctx.edge_uplinks.resize(tree.edge_count());
    for (const auto& [uid, u] : state.uplinks) {
        int pos = static_cast<int>(ctx.uplink_ids.size());
        ctx.uplink_ids.push_back(uid);
        ctx.uplink_wbar.push_back(wbar(state, uid));
        std::vector<int> path = uplink_path(tree, u.bottom, u.top);
        ctx.missing_init.push_back(static_cast<int>(path.size()));
        for (int e : path) ctx.edge_uplinks[e].push_back(pos);
        int last = -1;
        for (int i = 0; i < m; ++i) {
            const std::vector<int>& lp = ctx.link_path[i];
            for (int e : path)
                if (std::binary_search(lp.begin(), lp.end(), e)) {
                    last = i;
                    break;
                }
        }
        ctx.last_intersecting.push_back(last);
    }

    ctx.cover_count.assign(tree.edge_count(), 0);
    ctx.load.assign(tree.vertex_count, 0);
    ctx.missing = ctx.missing_init;
    ctx.dropped.assign(ctx.uplink_ids.size(), 0);
    ctx.best_gain = 0.0;

    search(ctx, 0);
    return {ctx.best_component, ctx.best_gain};
}

WtapSearchResult best_component_heuristic(const WtapState& state) {
    const WtapInstance& instance = *state.instance;
    const int m = static_cast<int>(instance.links.size());

    std::vector<int> link_apex(m);
    for (int i = 0; i < m; ++i)
        link_apex[i] = apex(instance.tree, {instance.links[i].a, instance.links[i].b});

    std::vector<int> best;
    double best_gain = 0.0;
    auto consider = [&](const std::vector<int>& candidate) {
        if (!is_k_thin(instance, candidate, state.k)) return;
        double g = gain(state, candidate);
        if (g > best_gain ||
            (g == best_gain && !best.empty() &&
             std::lexicographical_compare(candidate.begin(), candidate.end(), best.begin(),
                                          best.end()))) {
            best_gain = g;
            best = candidate;
        }
    };

    for (int i = 0; i < m; ++i) consider({i});
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (link_apex[i] == link_apex[j]) consider({i, j});

    if (best_gain <= 0.0) return {{}, 0.0};
    return {best, best_gain};
}

void apply_component(WtapState& state, const std::vector<int>& component) {
    // Remove Drop from U and from every witness set.
    for (int uid : drop_u(state, component)) {
        const WitnessUplink& u = state.uplinks.at(uid);
        auto& owner_witness = state.witness.at(u.owner);
        owner_witness.erase(std::find(owner_witness.begin(), owner_witness.end(), uid));
        state.uplinks.erase(uid);
    }

    // Add the component with fresh witness sets W_l = U_l. A link re-added
    // from F just had all its witnesses dropped (their paths lie inside the
    // component's paths), so the fresh set replaces an empty one.
    std::vector<int> sorted(component);
    std::sort(sorted.begin(), sorted.end());
    for (int id : sorted) insert_link_with_fresh_witness(state, id);

    shorten_uplinks(state);

    for (auto it = state.witness.begin(); it != state.witness.end();) {
        if (it->second.empty())
            it = state.witness.erase(it);
        else
            ++it;
    }
}

WtapResult run_wtap(const WtapInstance& instance, double epsilon, WtapEngine engine,
                    const WtapLimits& limits) {
    if (!(epsilon > 0.0 && epsilon <= 0.5))
        throw ConfigError("wtap epsilon must lie in (0, 1/2]");

    WtapResult result;
    result.instance = (limits.apply_shadow_close && !instance.shadow_closed)
                          ? shadow_close(instance, limits.shadow_close_cap)
                          : instance;
    const WtapInstance& solved = result.instance;
    const int n = solved.tree.vertex_count;

    if (n == 1) return result;
    if (!is_cover(solved.tree, std::span<const Link>(solved.links)))
        throw InfeasibleInstance("link set cannot cover the tree");

    const int k = limits.k > 0 ? limits.k : static_cast<int>(std::ceil(4.0 / epsilon));
    const int size_cap = limits.size_cap > 0
                             ? limits.size_cap
                             : std::min<int>(static_cast<int>(solved.links.size()), 2 * k);

    WtapState state = init_state(solved, initial_wtap_solution(solved), epsilon, k);

    const auto run_start = std::chrono::steady_clock::now();
    const double factor = 1.0 - epsilon / (6.0 * n);
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
        WtapSearchResult found = (engine == WtapEngine::exact)
                                     ? best_component_exact(state, size_cap, limits.node_budget)
                                     : best_component_heuristic(state);
        if (found.component.empty()) break;

        double phi_before = potential_wtap(state);
        double drop_weight = 0.0;
        for (int uid : drop_u(state, found.component)) drop_weight += wbar(state, uid);

        WtapState snapshot = state;
        apply_component(state, found.component);
        double phi_after = potential_wtap(state);
        if (phi_after > factor * phi_before) {
            state = std::move(snapshot);
            break;
        }

        ++iteration;
        WtapTraceRow row;
        row.iteration = iteration;
        row.potential_before = phi_before;
        row.potential_after = phi_after;
        row.solution_weight = solution_weight(state);
        row.component_size = static_cast<int>(found.component.size());
        row.drop_wbar = drop_weight;
        double component_weight = 0.0;
        for (int id : found.component) component_weight += solved.links[id].weight;
        row.component_weight = component_weight;
        row.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                      iter_start)
                .count();
        result.trace.push_back(row);
    }

    for (const auto& [id, w] : state.witness) result.solution.push_back(id);
    result.weight = solution_weight(state);
    result.potential = potential_wtap(state);
    return result;
}

std::optional<std::string> wtap_state_violation(const WtapState& state) {
    const WtapInstance& instance = *state.instance;
    const RootedTree& tree = instance.tree;

    if (!is_cover(tree, solution_pairs(state))) return "solution F is not a cover";
    if (!is_cover(tree, uplink_pairs(state))) return "up-link solution U is not a cover";

    std::vector<int> cover_count(tree.edge_count(), 0);
    for (const auto& [uid, u] : state.uplinks)
        for (int e : uplink_path(tree, u.bottom, u.top))
            if (++cover_count[e] > 1) return "up-link paths are not pairwise disjoint";

    std::set<int> referenced;
    for (const auto& [id, w] : state.witness) {
        if (w.empty() || w.size() > 2)
            return "witness set of link " + std::to_string(id) + " has size " +
                   std::to_string(w.size());
        const Link& link = instance.links[id];
        for (int uid : w) {
            auto it = state.uplinks.find(uid);
            if (it == state.uplinks.end())
                return "witness set references missing up-link " + std::to_string(uid);
            if (!referenced.insert(uid).second)
                return "up-link " + std::to_string(uid) + " referenced twice";
            const WitnessUplink& u = it->second;
            if (u.owner != id) return "up-link owner mismatch";
            if (apex(tree, {u.bottom, u.top}) != u.top)
                return "witness entry is not an up-link";
            if (!is_shadow(tree, {u.bottom, u.top}, {link.a, link.b}))
                return "witness entry is not a shadow of its link";
        }
    }
    if (referenced.size() != state.uplinks.size())
        return "U contains up-links not referenced by any witness set";

    double weight = solution_weight(state);
    if (std::abs(wbar_total(state) - weight) > 1e-9 * std::max(1.0, weight))
        return "wbar(U) != w(F)";
    double phi = potential_wtap(state);
    if (phi < weight - 1e-9 * weight || phi > 1.5 * weight + 1e-9 * weight)
        return "potential outside [w(F), 1.5 w(F)]";
    return std::nullopt;
}

}  // namespace treels
