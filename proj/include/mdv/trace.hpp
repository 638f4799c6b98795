#pragma once

#include <string>
#include <vector>

#include "mdv/op.hpp"

namespace mdv {

struct TraceRecord {
    int step = 0;
    std::string stage; // "P1", "P2P1", ... (prefix compositions of the operator)
    Vec point;
};

// Iterates a composition and records the point after each constituent stage.
// For a non-composite operator there is a single stage.
std::vector<TraceRecord> collect_trace(const OpPtr& op, const Vec& x0, int steps);

// Byte-deterministic renderings for fixed inputs.
std::string render_trace_csv(const std::vector<TraceRecord>& records);
std::string render_trace_svg(const OpPtr& op, const Vec& x0,
                             const std::vector<TraceRecord>& records);

// Writes CSV (and, for dim-2 operators, SVG) renderings of the trace.
// Either path may be empty to skip that output.
void emit_trace(const OpPtr& op, const Vec& x0, int steps, const std::string& csv_path,
                const std::string& svg_path);

} // namespace mdv
