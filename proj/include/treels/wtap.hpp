#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treels/trace.hpp"
#include "treels/tree_core.hpp"

namespace treels {

struct WtapInstance {
    RootedTree tree;
    std::vector<Link> links;  // link ids equal positions in this vector
    bool shadow_closed = false;
};

// Entry of the up-link solution U. `top` is an ancestor of `bottom`; `owner`
// is the solution link whose witness set holds this up-link.
struct WitnessUplink {
    int bottom = -1;
    int top = -1;
    int owner = -1;
};

// Mutable local-search state: the solution F keyed by link id, each link
// carrying the up-link ids of its witness set, and the up-link solution U.
// Ordered maps keep every traversal deterministic.
struct WtapState {
    const WtapInstance* instance = nullptr;
    std::map<int, std::vector<int>> witness;  // link id -> up-link ids (1 or 2)
    std::map<int, WitnessUplink> uplinks;     // up-link id -> entry
    int next_uplink_id = 0;
    double epsilon = 0.5;
    int k = 8;
};

using WtapTraceRow = TraceRow;

struct WtapSearchResult {
    std::vector<int> component;  // link ids, ascending; empty when no improvement
    double gain = 0.0;
};

enum class WtapEngine { exact, heuristic };

struct WtapLimits {
    int k = 0;                                // 0 = ceil(4/epsilon)
    int size_cap = 0;                         // 0 = min(|L|, 2k)
    long long node_budget = 2'000'000;        // branch-and-bound nodes per search
    double time_budget_s = 0.0;               // 0 = unlimited; checked between iterations
    bool apply_shadow_close = true;
    std::size_t shadow_close_cap = 1'000'000;
};

struct WtapResult {
    std::vector<int> solution;  // link ids into `instance`, ascending
    std::vector<WtapTraceRow> trace;
    WtapInstance instance;      // the instance actually solved (after shadow closing)
    double weight = 0.0;
    double potential = 0.0;
    bool time_budget_hit = false;
};

// Materializes all shadows; duplicate pairs keep the minimum generator weight.
WtapInstance shadow_close(const WtapInstance& instance, std::size_t cap = 1'000'000);

// The up-link pair(s) covering the same tree edges as the link.
std::vector<VertexPair> split_to_uplinks(const RootedTree& tree, const Link& link);

// Inclusion-minimal cover by greedy pruning in descending weight order.
std::vector<int> initial_wtap_solution(const WtapInstance& instance);

WtapState init_state(const WtapInstance& instance, const std::vector<int>& initial_solution,
                     double epsilon, int k);

// Lemma-1 style normalization: delete redundant up-links, then shorten each
// survivor to the smallest shadow keeping coverage. Afterwards the paths P_u
// are pairwise edge-disjoint; links whose witness sets emptied leave F.
void shorten_uplinks(WtapState& state);

// Up-link ids whose paths are fully covered by the component's paths.
std::vector<int> drop_u(const WtapState& state, const std::vector<int>& component);

double wbar(const WtapState& state, int uplink_id);
double wbar_total(const WtapState& state);
double solution_weight(const WtapState& state);
double potential_wtap(const WtapState& state);

// wbar(Drop_U(C)) - 1.5 * w(C)
double gain(const WtapState& state, const std::vector<int>& component);

bool is_k_thin(const RootedTree& tree, std::span<const Link> component, int k);
bool is_k_thin(const WtapInstance& instance, const std::vector<int>& component, int k);

// Exact max-gain k-thin component of size <= size_cap via branch and bound.
// Ties go to the lexicographically smallest id sequence; the empty set is a
// candidate with gain 0. Throws Timeout when node_budget is exhausted.
WtapSearchResult best_component_exact(const WtapState& state, int size_cap,
                                      long long node_budget = 2'000'000);

// Max-gain candidate among singletons and apex-sharing pairs; no guarantee.
WtapSearchResult best_component_heuristic(const WtapState& state);

// One local exchange: remove Drop, add the component with fresh witness sets,
// shorten up-links, sweep links with empty witness sets.
void apply_component(WtapState& state, const std::vector<int>& component);

WtapResult run_wtap(const WtapInstance& instance, double epsilon, WtapEngine engine,
                    const WtapLimits& limits = {});

// First violated state invariant, if any; used by tests and the acceptance
// suite after every step.
std::optional<std::string> wtap_state_violation(const WtapState& state);

}  // namespace treels
