#include "mdv/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "mdv/hyperbola.hpp"

namespace mdv {

namespace {

bool is_projector_leaf(const Op& op) {
    const auto& n = op.node();
    return std::holds_alternative<nodes::ProjHyperplane>(n) ||
           std::holds_alternative<nodes::ProjHalfspace>(n) ||
           std::holds_alternative<nodes::ProjBox>(n) ||
           std::holds_alternative<nodes::ProjBall>(n) ||
           std::holds_alternative<nodes::ProjHyperbolaEpi>(n);
}

// Stage labels grow right-to-left, matching application order: "P1", "P2P1", ...
std::vector<std::string> stage_labels(const std::vector<OpPtr>& children) {
    std::vector<std::string> labels;
    std::string acc;
    for (std::size_t i = 0; i < children.size(); ++i) {
        std::string name =
            (is_projector_leaf(*children[i]) ? "P" : "T") + std::to_string(i + 1);
        acc = name + acc;
        labels.push_back(acc);
    }
    return labels;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Box2 {
    double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
    void grow(double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
};

} // namespace

std::vector<TraceRecord> collect_trace(const OpPtr& op, const Vec& x0, int steps) {
    if (!op) throw Error(Errc::bad_parameter, "trace: null operator");
    if (steps < 1) throw Error(Errc::bad_parameter, "trace needs steps >= 1");
    std::vector<OpPtr> children;
    if (const auto* c = std::get_if<nodes::Compose>(&op->node())) {
        children = c->children;
    } else {
        children = {op};
    }
    std::vector<std::string> labels = stage_labels(children);

    std::vector<TraceRecord> out;
    out.reserve(static_cast<std::size_t>(steps) * children.size());
    Vec cur = x0;
    for (int step = 0; step < steps; ++step) {
        for (std::size_t i = 0; i < children.size(); ++i) {
            cur = evaluate(children[i], cur);
            out.push_back(TraceRecord{step, labels[i], cur});
        }
    }
    return out;
}

std::string render_trace_csv(const std::vector<TraceRecord>& records) {
    std::string out;
    if (!records.empty() && records.front().point.size() != 2) {
        out = "step,stage";
        for (std::size_t k = 0; k < records.front().point.size(); ++k) {
            out += ",c" + std::to_string(k);
        }
        out += "\n";
    } else {
        out = "step,stage,x,y\n";
    }
    for (const auto& r : records) {
        out += std::to_string(r.step) + "," + r.stage;
        for (double c : r.point) out += fmt(",%.17g", c);
        out += "\n";
    }
    return out;
}

namespace {

// Collects the 2-D sets referenced by the expression so the plot can show them.
void collect_shapes(const Op& op, std::vector<const Op::Node*>& shapes) {
    const auto& n = op.node();
    if (is_projector_leaf(op)) {
        shapes.push_back(&n);
        return;
    }
    if (const auto* c = std::get_if<nodes::Compose>(&n)) {
        for (const auto& ch : c->children) collect_shapes(*ch, shapes);
    } else if (const auto* cc = std::get_if<nodes::ConvexCombo>(&n)) {
        for (const auto& ch : cc->children) collect_shapes(*ch, shapes);
    } else if (const auto* av = std::get_if<nodes::Averaged>(&n)) {
        collect_shapes(*av->inner, shapes);
    }
}

} // namespace

std::string render_trace_svg(const OpPtr& op, const Vec& x0,
                             const std::vector<TraceRecord>& records) {
    if (!op || op->dim() != 2) throw Error(Errc::bad_parameter, "SVG traces need a dim-2 operator");

    // World box from the data, padded; values rounded to 4 decimals keep the
    // output byte-deterministic.
    Box2 box;
    box.grow(x0[0], x0[1]);
    for (const auto& r : records) box.grow(r.point[0], r.point[1]);
    double padx = 0.1 * (box.xmax - box.xmin) + 0.5;
    double pady = 0.1 * (box.ymax - box.ymin) + 0.5;
    box.xmin -= padx; box.xmax += padx;
    box.ymin -= pady; box.ymax += pady;

    const double W = 800, H = 600, margin = 46;
    auto sx = [&](double x) {
        return margin + (x - box.xmin) / (box.xmax - box.xmin) * (W - 2 * margin);
    };
    auto sy = [&](double y) {
        return H - margin - (y - box.ymin) / (box.ymax - box.ymin) * (H - 2 * margin);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
           "height=\"600\" viewBox=\"0 0 800 600\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

    // Sets referenced by the composition.
    std::vector<const Op::Node*> shapes;
    collect_shapes(*op, shapes);
    int shape_idx = 0;
    for (const auto* n : shapes) {
        ++shape_idx;
        const std::string grey = "#9c9c9c";
        if (const auto* hp = std::get_if<nodes::ProjHyperplane>(n)) {
            // Line <normal, p> = offset clipped to the box (drawn via two far points).
            double nx = hp->normal[0], ny = hp->normal[1], b = hp->offset;
            double cx = nx * b * hp->inv_norm_sq, cy = ny * b * hp->inv_norm_sq;
            double tx = -ny, ty = nx;
            double span = 2.0 * std::max(box.xmax - box.xmin, box.ymax - box.ymin);
            svg += "<line x1=\"" + fmt("%.4f", sx(cx - span * tx)) + "\" y1=\"" +
                   fmt("%.4f", sy(cy - span * ty)) + "\" x2=\"" + fmt("%.4f", sx(cx + span * tx)) +
                   "\" y2=\"" + fmt("%.4f", sy(cy + span * ty)) + "\" stroke=\"" + grey +
                   "\" stroke-width=\"1\"/>\n";
        } else if (const auto* hs = std::get_if<nodes::ProjHalfspace>(n)) {
            double nx = hs->normal[0], ny = hs->normal[1], b = hs->offset;
            double cx = nx * b * hs->inv_norm_sq, cy = ny * b * hs->inv_norm_sq;
            double tx = -ny, ty = nx;
            double span = 2.0 * std::max(box.xmax - box.xmin, box.ymax - box.ymin);
            svg += "<line x1=\"" + fmt("%.4f", sx(cx - span * tx)) + "\" y1=\"" +
                   fmt("%.4f", sy(cy - span * ty)) + "\" x2=\"" + fmt("%.4f", sx(cx + span * tx)) +
                   "\" y2=\"" + fmt("%.4f", sy(cy + span * ty)) + "\" stroke=\"" + grey +
                   "\" stroke-width=\"1\" stroke-dasharray=\"6 3\"/>\n";
        } else if (const auto* bx = std::get_if<nodes::ProjBox>(n)) {
            svg += "<rect x=\"" + fmt("%.4f", sx(bx->lo[0])) + "\" y=\"" +
                   fmt("%.4f", sy(bx->hi[1])) + "\" width=\"" +
                   fmt("%.4f", sx(bx->hi[0]) - sx(bx->lo[0])) + "\" height=\"" +
                   fmt("%.4f", sy(bx->lo[1]) - sy(bx->hi[1])) +
                   "\" fill=\"none\" stroke=\"" + grey + "\" stroke-width=\"1\"/>\n";
        } else if (const auto* bl = std::get_if<nodes::ProjBall>(n)) {
            svg += "<circle cx=\"" + fmt("%.4f", sx(bl->center[0])) + "\" cy=\"" +
                   fmt("%.4f", sy(bl->center[1])) + "\" r=\"" +
                   fmt("%.4f", (sx(bl->center[0] + bl->radius) - sx(bl->center[0]))) +
                   "\" fill=\"none\" stroke=\"" + grey + "\" stroke-width=\"1\"/>\n";
        } else if (std::holds_alternative<nodes::ProjHyperbolaEpi>(*n)) {
            // Boundary curve y = 1/x sampled across the visible x range.
            double x_from = std::max(box.xmin, box.ymax > 0 ? 1.0 / box.ymax : 1e-3);
            x_from = std::max(x_from, 1e-3);
            double x_to = std::max(box.xmax, x_from * 2.0);
            const int samples = 256;
            std::string pts;
            for (int i = 0; i <= samples; ++i) {
                double t = x_from * std::pow(x_to / x_from, static_cast<double>(i) / samples);
                if (!pts.empty()) pts += " ";
                pts += fmt("%.4f", sx(t)) + "," + fmt("%.4f", sy(1.0 / t));
            }
            svg += "<polyline points=\"" + pts +
                   "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1.2\"/>\n";
        }
        (void)shape_idx;
    }

    // Point families per stage; the composite (last stage) is black.
    std::vector<std::string> stages;
    for (const auto& r : records) {
        if (std::find(stages.begin(), stages.end(), r.stage) == stages.end()) {
            stages.push_back(r.stage);
        }
    }
    const std::vector<std::string> palette = {"#1f77b4", "#2ca02c", "#d62728",
                                              "#9467bd", "#ff7f0e", "#8c564b"};
    auto stage_color = [&](std::size_t i) {
        if (i + 1 == stages.size()) return std::string("#000000");
        return palette[i % palette.size()];
    };

    for (std::size_t s = 0; s < stages.size(); ++s) {
        svg += "<g fill=\"" + stage_color(s) + "\">\n";
        for (const auto& r : records) {
            if (r.stage != stages[s]) continue;
            svg += "<circle cx=\"" + fmt("%.4f", sx(r.point[0])) + "\" cy=\"" +
                   fmt("%.4f", sy(r.point[1])) + "\" r=\"2.5\"/>\n";
        }
        svg += "</g>\n";
    }

    // Start point and legend.
    svg += "<circle cx=\"" + fmt("%.4f", sx(x0[0])) + "\" cy=\"" + fmt("%.4f", sy(x0[1])) +
           "\" r=\"4\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
    double ly = 20;
    svg += "<text x=\"56\" y=\"" + fmt("%.4f", ly) +
           "\" font-family=\"sans-serif\" font-size=\"13\">x0</text>\n";
    svg += "<circle cx=\"46\" cy=\"" + fmt("%.4f", ly - 4) +
           "\" r=\"4\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
    for (std::size_t s = 0; s < stages.size(); ++s) {
        ly += 18;
        svg += "<circle cx=\"46\" cy=\"" + fmt("%.4f", ly - 4) + "\" r=\"2.5\" fill=\"" +
               stage_color(s) + "\"/>\n";
        svg += "<text x=\"56\" y=\"" + fmt("%.4f", ly) +
               "\" font-family=\"sans-serif\" font-size=\"13\">" + stages[s] + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_trace(const OpPtr& op, const Vec& x0, int steps, const std::string& csv_path,
                const std::string& svg_path) {
    std::vector<TraceRecord> records = collect_trace(op, x0, steps);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw Error(Errc::io_error, "cannot write " + csv_path);
        out << render_trace_csv(records);
    }
    if (!svg_path.empty()) {
        std::ofstream out(svg_path, std::ios::binary);
        if (!out) throw Error(Errc::io_error, "cannot write " + svg_path);
        out << render_trace_svg(op, x0, records);
    }
}

} // namespace mdv
