#include "mdv/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdv/monotone.hpp"

namespace mdv {

namespace {

bool bitwise_equal(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

} // namespace

DisplacementEstimate estimate_displacement(const OpPtr& op, const EstimatorConfig& cfg) {
    if (!op) throw Error(Errc::bad_parameter, "estimate_displacement: null operator");
    if (cfg.max_iter < 1) throw Error(Errc::bad_parameter, "max_iter must be >= 1");
    if (!(cfg.tol_residual_change > 0.0)) throw Error(Errc::bad_parameter, "tolerance must be > 0");
    if (cfg.window < 1) throw Error(Errc::bad_parameter, "window must be >= 1");
    if (cfg.record_every < 1) throw Error(Errc::bad_parameter, "record_every must be >= 1");

    // Operators whose structure certifies averagedness can be iterated as-is;
    // anything else is damped to (Id+T)/2, whose displacement range is half
    // the original, so the result is rescaled by 2.
    OpPtr iter_op = op;
    double scale = 1.0;
    if (!(op->averaged_alpha() < 1.0)) {
        iter_op = averaged(0.5, op);
        scale = 2.0;
    }

    Vec x = cfg.x0 ? *cfg.x0 : zeros(op->dim());
    if (static_cast<int>(x.size()) != op->dim()) {
        throw Error(Errc::dimension_mismatch, "x0 dim does not match the operator");
    }

    const int window = cfg.window;
    std::vector<Vec> ring(static_cast<std::size_t>(window) + 1);

    DisplacementEstimate est;
    Vec diff, prev_diff;
    long n = 0;
    bool converged = false;
    while (n < cfg.max_iter) {
        ++n;
        Vec next = evaluate(iter_op, x);
        if (!all_finite(next)) {
            throw OverflowError("iterate became non-finite at step " + std::to_string(n), x,
                                n - 1);
        }
        diff = sub(x, next);
        if ((n - 1) % cfg.record_every == 0) {
            double r = scale * norm(diff);
            est.residual_history.push_back(r);
            if (cfg.residual_sink) cfg.residual_sink(n, r, next);
        }

        // Exact stationarity: two bitwise-identical successive differences
        // (or a zero difference) cannot tighten any further.
        if (norm_sq(diff) == 0.0) {
            x = std::move(next);
            converged = true;
            break;
        }
        if (n >= 2 && bitwise_equal(diff, prev_diff)) {
            x = std::move(next);
            converged = true;
            break;
        }
        if (n > window) {
            const Vec& old = ring[static_cast<std::size_t>((n - window) % (window + 1))];
            if (dist(diff, old) <= cfg.tol_residual_change) {
                x = std::move(next);
                converged = true;
                break;
            }
        }
        ring[static_cast<std::size_t>(n % (window + 1))] = diff;
        prev_diff = diff;
        x = std::move(next);
    }

    est.v_hat = scaled(diff, scale);
    est.upper_bound = norm(est.v_hat);
    est.iterations = n;
    est.converged = converged;
    est.final_iterate = std::move(x);
    return est;
}

std::optional<Vec> translation_displacement(const OpPtr& op) {
    if (!op) return std::nullopt;
    const auto& node = op->node();
    if (const auto* t = std::get_if<nodes::Translation>(&node)) return t->a;
    if (const auto* s = std::get_if<nodes::AffineScale>(&node)) {
        if (s->beta == 1.0) return s->a;
        return std::nullopt;
    }
    if (const auto* r = std::get_if<nodes::Resolvent>(&node)) {
        // J of a (possibly shifted) constant map is a translation.
        const MonotoneSpec* spec = r->spec.get();
        Vec shift = zeros(op->dim());
        while (const auto* sh = std::get_if<monotone::Shifted>(&spec->kind())) {
            shift = add(shift, sh->v);
            spec = sh->inner.get();
        }
        if (const auto* c = std::get_if<monotone::ConstantMap>(&spec->kind())) {
            return sub(c->c, shift); // x -> x - c + shift
        }
        return std::nullopt;
    }
    if (const auto* c = std::get_if<nodes::Compose>(&node)) {
        Vec total = zeros(op->dim());
        for (const auto& child : c->children) {
            auto a = translation_displacement(child);
            if (!a) return std::nullopt;
            total = add(total, *a);
        }
        return total;
    }
    if (const auto* cc = std::get_if<nodes::ConvexCombo>(&node)) {
        Vec total = zeros(op->dim());
        for (std::size_t i = 0; i < cc->children.size(); ++i) {
            auto a = translation_displacement(cc->children[i]);
            if (!a) return std::nullopt;
            axpy(cc->weights[i], *a, total);
        }
        return total;
    }
    if (const auto* av = std::get_if<nodes::Averaged>(&node)) {
        auto a = translation_displacement(av->inner);
        if (!a) return std::nullopt;
        return scaled(*a, av->alpha);
    }
    if (const auto* bd = std::get_if<nodes::BlockDiag>(&node)) {
        Vec total;
        for (const auto& child : bd->children) {
            auto a = translation_displacement(child);
            if (!a) return std::nullopt;
            total.insert(total.end(), a->begin(), a->end());
        }
        return total;
    }
    return std::nullopt;
}

std::optional<Vec> exact_displacement(const OpPtr& op) {
    if (auto a = translation_displacement(op)) return a;
    // A structural Lipschitz bound < 1 certifies a fixed point.
    if (op && op->lipschitz_bound() < 1.0 - 1e-12) return zeros(op->dim());
    return std::nullopt;
}

namespace {

// Exact displacement where derivable, estimate otherwise.
Vec displacement_of(const OpPtr& op, const EstimatorConfig& cfg, bool& converged) {
    if (auto e = exact_displacement(op)) {
        converged = true;
        return *e;
    }
    DisplacementEstimate est = estimate_displacement(op, cfg);
    converged = est.converged;
    return est.v_hat;
}

} // namespace

BoundCheck check_composition_bound(const std::vector<OpPtr>& ops, const EstimatorConfig& cfg,
                                   double tolerance) {
    if (ops.size() < 2) throw Error(Errc::bad_parameter, "composition bound needs >= 2 operators");
    BoundCheck out;
    out.tolerance = tolerance;

    DisplacementEstimate comp = estimate_displacement(compose(ops), cfg);
    out.composite_displacement = comp.v_hat;
    out.all_converged = comp.converged;
    out.lhs = norm(comp.v_hat);

    double rhs = 0.0;
    for (const auto& op : ops) {
        bool conv = true;
        Vec v = displacement_of(op, cfg, conv);
        out.all_converged = out.all_converged && conv;
        rhs += norm(v);
        out.child_displacements.push_back(std::move(v));
    }
    out.rhs = rhs;
    out.slack = out.rhs + tolerance - out.lhs;
    out.pass = out.lhs <= out.rhs + tolerance;
    return out;
}

BoundCheck check_convex_combo_bound(const std::vector<double>& weights,
                                    const std::vector<OpPtr>& ops, const EstimatorConfig& cfg,
                                    double tolerance) {
    if (ops.size() < 2) throw Error(Errc::bad_parameter, "combination bound needs >= 2 operators");
    BoundCheck out;
    out.tolerance = tolerance;

    DisplacementEstimate combo = estimate_displacement(convex_combination(weights, ops), cfg);
    out.composite_displacement = combo.v_hat;
    out.all_converged = combo.converged;
    out.lhs = norm(combo.v_hat);

    Vec weighted_sum = zeros(ops.front()->dim());
    for (std::size_t i = 0; i < ops.size(); ++i) {
        bool conv = true;
        Vec v = displacement_of(ops[i], cfg, conv);
        out.all_converged = out.all_converged && conv;
        axpy(weights[i], v, weighted_sum);
        out.child_displacements.push_back(std::move(v));
    }
    out.rhs = norm(weighted_sum);
    out.slack = out.rhs + tolerance - out.lhs;
    out.pass = out.lhs <= out.rhs + tolerance;
    return out;
}

RotationComparison compare_cyclic_rotations(const std::vector<OpPtr>& ops,
                                            const EstimatorConfig& cfg) {
    const std::size_t m = ops.size();
    if (m < 2) throw Error(Errc::bad_parameter, "rotation comparison needs >= 2 operators");
    RotationComparison out;
    for (std::size_t r = 0; r < m; ++r) {
        std::vector<OpPtr> rotated;
        rotated.reserve(m);
        for (std::size_t i = 0; i < m; ++i) rotated.push_back(ops[(r + i) % m]);
        DisplacementEstimate est = estimate_displacement(compose(rotated), cfg);
        out.converged.push_back(est.converged);
        out.all_converged = out.all_converged && est.converged;
        out.estimates.push_back(std::move(est.v_hat));
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            out.max_pairwise_gap =
                std::max(out.max_pairwise_gap, dist(out.estimates[i], out.estimates[j]));
        }
    }
    return out;
}

AttainmentDiagnosis diagnose_attainment(const OpPtr& op, const Vec& v_hat,
                                        const EstimatorConfig& cfg, double radius_limit) {
    if (!op) throw Error(Errc::bad_parameter, "diagnose_attainment: null operator");
    if (static_cast<int>(v_hat.size()) != op->dim()) {
        throw Error(Errc::dimension_mismatch, "v_hat dim does not match the operator");
    }
    AttainmentDiagnosis out;
    Vec x = cfg.x0 ? *cfg.x0 : zeros(op->dim());
    out.orbit_radius = norm(x);
    long n = 0;
    for (; n < cfg.max_iter; ++n) {
        Vec next = add(v_hat, evaluate(op, x));
        if (!all_finite(next)) {
            out.iterates_bounded = false;
            out.final_iterate = std::move(x);
            out.iterations = n;
            out.fixed_point_residual = std::numeric_limits<double>::infinity();
            return out;
        }
        x = std::move(next);
        out.orbit_radius = std::max(out.orbit_radius, norm(x));
        if (out.orbit_radius > radius_limit) {
            out.iterates_bounded = false;
            break;
        }
    }
    out.iterations = n;
    out.fixed_point_residual = dist(x, add(v_hat, evaluate(op, x)));
    out.final_iterate = std::move(x);
    return out;
}

} // namespace mdv
