#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treels/trace.hpp"

namespace treels {

struct SteinerEdge {
    int id = -1;
    int a = -1;
    int b = -1;
    double weight = 0.0;
};

struct SteinerInstance {
    int vertex_count = 0;
    std::vector<SteinerEdge> edges;  // edge ids equal positions in this vector
    std::vector<int> terminals;      // ascending, unique, nonempty
};

// Unordered terminal pair, normalized to (min, max). The pair itself is the
// id used for deterministic tie-breaking.
using TerminalPair = std::pair<int, int>;

inline TerminalPair make_pair_sorted(int a, int b) {
    return a < b ? TerminalPair{a, b} : TerminalPair{b, a};
}

constexpr double kLn4 = 1.3862943611198906;  // ln 4, correctly rounded

// H_q = sum_{i=1..q} 1/i, accumulated in ascending order.
double harmonic(int q);

// All-pairs shortest paths with deterministic reconstruction (the
// lexicographically smallest vertex sequence among shortest paths).
struct MetricClosure {
    const SteinerInstance* instance = nullptr;
    std::vector<std::vector<double>> dist;      // kInf when unreachable
    std::vector<std::vector<int>> best_edge;    // min-weight edge id per vertex pair, -1 if none

    static constexpr double kInf = 1e100;

    std::vector<int> path(int a, int b) const;       // vertex sequence from min(a,b)
    std::vector<int> path_edge_ids(int a, int b) const;
};

MetricClosure metric_closure(const SteinerInstance& instance);

// A candidate improvement: a tree C, the terminals it connects, its witness
// tree S_C, and per-edge witness sets W_f inside S_C.
struct SteinerComponent {
    std::vector<int> edges;                            // ascending edge ids
    std::vector<int> terminals;                        // T_C ascending
    std::vector<TerminalPair> witness_tree;            // S_C, sorted
    std::map<int, std::vector<TerminalPair>> witness;  // edge id -> W_f (sorted)
    double potential = 0.0;                            // sum H_{|W_f|} w(f) <= ln4 w(C)
};

struct SteinerState {
    const SteinerInstance* instance = nullptr;
    std::map<int, std::vector<TerminalPair>> witness;  // F: edge id -> W_f (sorted, nonempty)
    double epsilon = 0.5;
    int k = 3;
};

struct SteinerLimits {
    int dw_subset_limit = 14;       // Dreyfus-Wagner terminal-set bound
    int witness_terminal_limit = 7; // |T_C| bound for witness-tree enumeration
    double time_budget_s = 0.0;     // 0 = unlimited; checked between iterations
};

struct SteinerResult {
    std::vector<int> solution;  // edge ids, ascending
    std::vector<TraceRow> trace;
    double weight = 0.0;
    double potential = 0.0;
    bool time_budget_hit = false;
};

struct DreyfusWagnerResult {
    std::vector<int> edges;  // ascending edge ids forming a tree
    double cost = 0.0;
};

// Exact minimum tree connecting the given vertex subset (classic dynamic
// program over (vertex, sub-subset) states).
DreyfusWagnerResult dreyfus_wagner(const SteinerInstance& instance, const std::vector<int>& subset,
                                   int size_limit = 14);

// 2-restricted start: terminal MST over the metric closure, each MST pair
// realized by its shortest graph path; shared edges get witness-set unions.
SteinerState initial_steiner_state(const SteinerInstance& instance, double epsilon, int k);

// The terminal spanning tree S = union of witness sets, with spread weights
// wbar(e) = sum_{f: e in W_f} w(f)/|W_f|, accumulated in ascending edge order.
std::map<TerminalPair, double> terminal_tree_wbar(const SteinerState& state);

// Minimum-potential witness tree over all labeled spanning trees on the
// connected terminals (Prufer enumeration; ties by lexicographic pair list).
SteinerComponent witness_tree_for_component(const SteinerInstance& instance,
                                            const std::vector<int>& component_edges,
                                            const std::vector<int>& terminals_connected,
                                            int size_limit = 7);

// Max-wbar set removable from S when the terminals T_C get contracted: S
// minus a min-wbar spanning tree of the contracted multigraph.
std::vector<TerminalPair> drop_s(const SteinerState& state,
                                 const std::vector<int>& terminals_connected);

// wbar(drop_s(T_C)) - ln4 * w(C)
double gain_steiner(const SteinerState& state, const SteinerComponent& component);

// Best component over all terminal subsets of size 2..k; none if every gain
// is <= 0. The component's terminal set is the set actually touched by the
// cheapest tree, which may exceed the enumerated subset.
std::optional<std::pair<SteinerComponent, double>> best_k_component(
    const SteinerState& state, const SteinerLimits& limits = {});

void apply_component_steiner(SteinerState& state, const SteinerComponent& component);

double steiner_solution_weight(const SteinerState& state);
double steiner_potential(const SteinerState& state);

SteinerResult run_steiner(const SteinerInstance& instance, double epsilon, int k,
                          const SteinerLimits& limits = {});

// 2^ceil(2 ln4 / epsilon); saturates at LLONG_MAX for tiny epsilon.
long long choose_k(double epsilon);

std::optional<std::string> steiner_state_violation(const SteinerState& state);

}  // namespace treels
