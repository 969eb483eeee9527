#pragma once

#include <cstdint>
#include <string>

#include "treels/steiner.hpp"
#include "treels/wtap.hpp"

namespace treels {

// WTAP text format (1-based vertices, '#' comments):
//   WTAP <n> <m>
//   ROOT <r>
//   EDGE <u> <v>      (exactly n-1 lines)
//   LINK <u> <v> <w>  (exactly m lines, w a positive decimal)
WtapInstance parse_wtap(const std::string& text);
std::string write_wtap(const WtapInstance& instance);

// SteinLib STP subset: SECTION Graph (Nodes/Edges/E lines) and
// SECTION Terminals (Terminals/T lines), terminated by EOF. Comments and
// unknown sections are skipped.
SteinerInstance parse_stp(const std::string& text);
std::string write_stp(const SteinerInstance& instance);

struct GeneratorConfig {
    std::uint64_t seed = 1;
    int vertex_count = 8;
    int edge_count = 12;     // link count for WTAP, edge count for Steiner
    int terminal_count = 3;  // Steiner only
    int max_weight = 10;     // integer weights uniform in [1, max_weight]
};

// Random spanning tree by parent attachment plus random distinct link pairs;
// a root link per leaf keeps the full link set a cover. Identical seeds give
// bit-identical instances.
WtapInstance gen_wtap(const GeneratorConfig& config);

// Random connected graph (spanning tree plus extra edges) with a random
// terminal subset.
SteinerInstance gen_steiner(const GeneratorConfig& config);

// Shortest round-trip decimal form, used by every writer.
std::string format_number(double value);

}  // namespace treels
