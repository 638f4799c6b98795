#include "mdv/checks.hpp"

#include <atomic>
#include <limits>

#include "mdv/rng.hpp"

namespace mdv {

namespace {

// Margin kernels, one sample each. Streams are derived from (seed, index), so
// the reduction result is independent of scheduling: the violation count is an
// integer sum and the worst margin a min, both exact under reordering.
template <typename MarginFn>
CheckReport run_margin_sweep(long sample_count, double tol, Exec exec, MarginFn&& margin_of) {
    if (sample_count < 1) throw Error(Errc::bad_parameter, "sample_count must be >= 1");

    long violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    std::atomic<bool> failed{false};

    const bool par = exec == Exec::parallel;
#pragma omp parallel for if (par) schedule(static) reduction(+ : violations) reduction(min : worst)
    for (long i = 0; i < sample_count; ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        double m;
        try {
            m = margin_of(i);
        } catch (...) {
            failed.store(true, std::memory_order_relaxed);
            continue;
        }
        if (m < worst) worst = m;
        if (m < -tol) ++violations;
    }
    if (failed.load()) {
        throw Error(Errc::numerical_failure, "operator evaluation failed during a sampled check");
    }
    return CheckReport{sample_count, violations, worst};
}

} // namespace

CheckReport check_firm_nonexpansive(const OpPtr& op, long sample_count, std::uint64_t seed,
                                    double box_radius, Exec exec, double tol) {
    const int d = op->dim();
    evaluate(op, zeros(d)); // surface dimension/kind errors before the sweep
    return run_margin_sweep(sample_count, tol, exec, [&](long i) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        Vec x = rng.uniform_vec(d, -box_radius, box_radius);
        Vec y = rng.uniform_vec(d, -box_radius, box_radius);
        Vec dT = sub(evaluate(op, x), evaluate(op, y));
        Vec dxy = sub(x, y);
        return dot(dxy, dT) - norm_sq(dT);
    });
}

CheckReport check_averaged(const OpPtr& op, double alpha, long sample_count, std::uint64_t seed,
                           double box_radius, Exec exec, double tol) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(Errc::bad_parameter, "alpha must lie in (0, 1)");
    }
    const int d = op->dim();
    evaluate(op, zeros(d));
    const double ratio = (1.0 - alpha) / alpha;
    return run_margin_sweep(sample_count, tol, exec, [&, ratio](long i) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        Vec x = rng.uniform_vec(d, -box_radius, box_radius);
        Vec y = rng.uniform_vec(d, -box_radius, box_radius);
        Vec Tx = evaluate(op, x), Ty = evaluate(op, y);
        Vec dT = sub(Tx, Ty);
        Vec dxy = sub(x, y);
        Vec dres = sub(sub(x, Tx), sub(y, Ty)); // (Id-T)x - (Id-T)y
        return norm_sq(dxy) - norm_sq(dT) - ratio * norm_sq(dres);
    });
}

CheckReport check_nonexpansive(const OpPtr& op, long sample_count, std::uint64_t seed,
                               double box_radius, Exec exec, double tol) {
    const int d = op->dim();
    evaluate(op, zeros(d));
    return run_margin_sweep(sample_count, tol, exec, [&](long i) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        Vec x = rng.uniform_vec(d, -box_radius, box_radius);
        Vec y = rng.uniform_vec(d, -box_radius, box_radius);
        return dist(x, y) - dist(evaluate(op, x), evaluate(op, y));
    });
}

CheckReport check_idempotent(const OpPtr& op, long sample_count, std::uint64_t seed,
                             double box_radius, Exec exec, double tol) {
    const int d = op->dim();
    evaluate(op, zeros(d));
    return run_margin_sweep(sample_count, tol, exec, [&](long i) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        Vec x = rng.uniform_vec(d, -box_radius, box_radius);
        Vec px = evaluate(op, x);
        return -dist(evaluate(op, px), px);
    });
}

} // namespace mdv
