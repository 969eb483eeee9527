#pragma once

namespace treels {

// One accepted local-search iteration, shared by both engines.
struct TraceRow {
    int iteration = 0;
    double potential_before = 0.0;
    double potential_after = 0.0;
    double solution_weight = 0.0;
    int component_size = 0;
    double drop_wbar = 0.0;
    double component_weight = 0.0;
    double elapsed_ms = 0.0;
};

}  // namespace treels
