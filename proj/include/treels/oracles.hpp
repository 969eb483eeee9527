#pragma once

#include <utility>
#include <vector>

#include "treels/steiner.hpp"
#include "treels/wtap.hpp"

namespace treels {

// Coverage, contraction and feasibility are reimplemented here from scratch;
// these routines share no decision-path code with the engines they check.

struct OracleReport {
    double opt_value = 0.0;
    std::vector<int> certificate;  // link ids (WTAP) or edge ids (Steiner)
    long long search_space_size = 0;
    double elapsed_ms = 0.0;
};

// Minimum-weight cover over all link subsets; certificate is the
// lexicographically smallest optimum.
OracleReport opt_wtap_bruteforce(const WtapInstance& instance, int max_links = 22);

// Exact minimum Steiner tree via the Dreyfus-Wagner routine on the full
// terminal set.
OracleReport opt_steiner_exact(const SteinerInstance& instance, int max_terminals = 14);

// Optimal k-restricted value: cheapest collection of at most |T|-1 terminal
// subsets (size 2..k, costed by dreyfus_wagner) whose hypergraph connects T.
// Component costs are summed without a sharing discount.
OracleReport opt_krestricted_bruteforce(const SteinerInstance& instance, int k,
                                        int max_terminals = 6);

// Plain enumeration of all k-thin subsets up to size_cap, same tie-break as
// the branch and bound.
WtapSearchResult best_component_bruteforce_wtap(const WtapState& state, int size_cap,
                                                int max_links = 12);

// All D subsets of S such that (T, S\D)/T_C is a tree; returns the max-wbar one.
std::pair<std::vector<TerminalPair>, double> drop_bruteforce_steiner(
    const SteinerState& state, const std::vector<int>& terminals_connected, int max_pairs = 8);

// From-scratch feasibility verdicts.
bool validate_wtap(const WtapInstance& instance, const std::vector<int>& link_ids);
bool validate_steiner(const SteinerInstance& instance, const std::vector<int>& edge_ids);

}  // namespace treels
