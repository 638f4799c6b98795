#include "mdv/demos.hpp"

#include <chrono>
#include <cmath>

#include "mdv/hyperbola.hpp"
#include "mdv/product_space.hpp"

namespace mdv {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

Json report_to_json(const ExperimentReport& r, bool include_wall_time) {
    Json j{{"experiment_id", r.experiment_id},
           {"seed", r.seed},
           {"inputs", r.inputs},
           {"results", r.results},
           {"verdict", verdict_name(r.verdict)}};
    if (include_wall_time) j["wall_time"] = r.wall_time;
    return j;
}

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// The verdict is derived from the recorded checks alone: any unconverged
// estimator makes the report inconclusive, otherwise all checks must pass.
Verdict derive_verdict(const Json& results) {
    bool all_pass = true;
    bool any_unconverged = false;
    for (const auto& rec : results) {
        if (rec.contains("pass") && !rec["pass"].get<bool>()) all_pass = false;
        if (rec.contains("converged") && !rec["converged"].get<bool>()) any_unconverged = true;
        if (rec.contains("all_converged") && !rec["all_converged"].get<bool>()) {
            any_unconverged = true;
        }
    }
    if (any_unconverged) return Verdict::inconclusive;
    return all_pass ? Verdict::pass : Verdict::fail;
}

Json check_record(std::string name, bool pass, Json extra) {
    extra["name"] = std::move(name);
    extra["pass"] = pass;
    return extra;
}

std::vector<OpPtr> depierro_sets_in_order(const std::vector<int>& order) {
    OpPtr p1 = proj_hyperplane({0.0, 1.0}, 0.0); // R x {0}
    OpPtr p2 = proj_hyperplane({0.0, 1.0}, 1.0); // R x {1}
    OpPtr p3 = proj_hyperbola_epi();             // {(x,y) : y >= 1/x > 0}
    std::vector<OpPtr> all = {p1, p2, p3};
    std::vector<OpPtr> out;
    for (int i : order) out.push_back(all[static_cast<std::size_t>(i - 1)]);
    return out;
}

ExperimentReport demo_translations(const DemoOptions& opt) {
    ExperimentReport rep;
    rep.experiment_id = "demo-translations";
    EstimatorConfig cfg;
    if (opt.max_iter > 0) cfg.max_iter = opt.max_iter;
    if (opt.tol > 0) cfg.tol_residual_change = opt.tol;

    auto run_pair = [&](double a1, double a2, const char* name, bool expect_equality) {
        std::vector<OpPtr> ops = {translation({a1}), translation({a2})};
        BoundCheck bc = check_composition_bound(ops, cfg);
        bool exact_lhs = std::abs(bc.lhs - std::abs(a1 + a2)) <= 1e-12;
        bool exact_rhs = std::abs(bc.rhs - (std::abs(a1) + std::abs(a2))) <= 1e-12;
        bool shape_ok = expect_equality ? std::abs(bc.lhs - bc.rhs) <= 1e-12
                                        : bc.rhs - bc.lhs >= 1.0;
        Json extra = bound_check_to_json(bc);
        extra["a1"] = a1;
        extra["a2"] = a2;
        extra["expected_lhs"] = std::abs(a1 + a2);
        rep.results.push_back(check_record(
            name, bc.pass && exact_lhs && exact_rhs && shape_ok, std::move(extra)));
    };
    // a1*a2 >= 0 gives equality in the composition bound; mixed signs are strict.
    run_pair(1.0, 2.0, "composition-bound-equality", true);
    run_pair(1.0, -2.0, "composition-bound-strict", false);

    rep.inputs = Json{{"pairs", Json::array({Json{{"a1", 1.0}, {"a2", 2.0}},
                                             Json{{"a1", 1.0}, {"a2", -2.0}}})}};
    rep.verdict = derive_verdict(rep.results);
    return rep;
}

ExperimentReport demo_convex_combo(const DemoOptions& opt) {
    ExperimentReport rep;
    rep.experiment_id = "demo-convex-combo";
    EstimatorConfig cfg;
    if (opt.max_iter > 0) cfg.max_iter = opt.max_iter;
    if (opt.tol > 0) cfg.tol_residual_change = opt.tol;

    // Strict case: the average of x -> x-1 and the contraction x -> x/2 has a
    // fixed point, so its displacement vanishes while w1*v1 + w2*v2 does not.
    {
        std::vector<OpPtr> ops = {translation({1.0}), affine_scale(0.5, {0.0})};
        std::vector<double> w = {0.5, 0.5};
        BoundCheck bc = check_convex_combo_bound(w, ops, cfg);
        bool lhs_zero = bc.lhs <= 1e-6;
        bool rhs_half = std::abs(bc.rhs - 0.5) <= 1e-12;
        Json extra = bound_check_to_json(bc);
        extra["weights"] = w;
        rep.results.push_back(
            check_record("combo-bound-strict", bc.pass && lhs_zero && rhs_half, std::move(extra)));
    }
    // Equality case: identical translations reproduce the translation itself.
    {
        std::vector<OpPtr> ops = {translation({0.6, -0.8}), translation({0.6, -0.8})};
        std::vector<double> w = {0.25, 0.75};
        BoundCheck bc = check_convex_combo_bound(w, ops, cfg);
        bool equal = std::abs(bc.lhs - bc.rhs) <= 1e-12 && std::abs(bc.lhs - 1.0) <= 1e-12;
        Json extra = bound_check_to_json(bc);
        extra["weights"] = w;
        rep.results.push_back(check_record("combo-bound-equality", bc.pass && equal,
                                           std::move(extra)));
    }
    rep.inputs = Json{{"strict_ops", Json::array({Json{{"type", "translation"}, {"a", {1.0}}},
                                                  Json{{"type", "affine_scale"},
                                                       {"beta", 0.5},
                                                       {"a", {0.0}}}})}};
    rep.verdict = derive_verdict(rep.results);
    return rep;
}

ExperimentReport demo_depierro_cyclic(const DemoOptions& opt) {
    ExperimentReport rep;
    rep.experiment_id = "demo-depierro-cyclic";
    std::vector<OpPtr> ops = depierro_sets_in_order({1, 2, 3}); // P3 P2 P1
    OpPtr comp = compose(ops);
    Vec x0 = {-3.0, 0.5};

    EstimatorConfig cfg;
    cfg.max_iter = opt.max_iter > 0 ? opt.max_iter : 100000;
    if (opt.tol > 0) cfg.tol_residual_change = opt.tol;
    cfg.x0 = x0;

    DisplacementEstimate est = estimate_displacement(comp, cfg);
    const Vec& z = est.final_iterate;
    // Fixed points sit on [1, inf) x {1}.
    double dist_line = std::abs(z[1] - 1.0);
    bool ok = est.converged && est.upper_bound <= 1e-6 && dist_line <= 1e-4 &&
              z[0] >= 1.0 - 1e-4;
    Json extra = estimate_to_json(est, false);
    extra["distance_to_line_y1"] = dist_line;
    rep.results.push_back(check_record("cyclic-converges-to-intersection", ok, std::move(extra)));

    EstimatorConfig dcfg = cfg;
    dcfg.max_iter = 20000;
    AttainmentDiagnosis diag = diagnose_attainment(comp, est.v_hat, dcfg);
    double dist_set = std::hypot(std::max(0.0, 1.0 - diag.final_iterate[0]),
                                 diag.final_iterate[1] - 1.0);
    bool ok2 = diag.iterates_bounded && diag.fixed_point_residual <= 1e-6 && dist_set <= 1e-4;
    Json extra2 = attainment_to_json(diag);
    extra2["distance_to_intersection"] = dist_set;
    rep.results.push_back(check_record("cyclic-attainment-evidence", ok2, std::move(extra2)));

    rep.inputs = Json{{"operator", operator_to_json(comp)}, {"x0", x0}};
    rep.verdict = derive_verdict(rep.results);
    return rep;
}

ExperimentReport demo_depierro_noncyclic(const DemoOptions& opt) {
    ExperimentReport rep;
    rep.experiment_id = "demo-depierro-noncyclic";
    // T3 T1 T2: apply P2 first, then P1, then the hyperbola projector.
    std::vector<OpPtr> ops = depierro_sets_in_order({2, 1, 3});
    OpPtr comp = compose(ops);
    Vec x0 = {-3.0, 0.5};
    const long budget = opt.max_iter > 0 ? opt.max_iter : 100000;

    // Raw orbit of the composition. The x-coordinate advances by about x^-3
    // per sweep (the projection of (x, 0) onto the curve lands at the root of
    // t^3 (t - x) = 1), so x_n grows like (4n + x0^4)^(1/4): unbounded, but
    // reaching x = 100 needs about 2.5e7 sweeps.
    Vec x = x0;
    long increasing = 0, comparisons = 0;
    double prev_x = x0[0];
    const long burn_in = 100;
    for (long n = 0; n < budget; ++n) {
        x = evaluate(comp, x);
        if (n >= burn_in) {
            ++comparisons;
            if (x[0] > prev_x) ++increasing;
        }
        prev_x = x[0];
    }
    double residual = dist(x, evaluate(comp, x));
    bool drift_monotone = comparisons > 0 && increasing == comparisons;

    Json orbit{{"iterations", budget},
               {"final_iterate", x},
               {"final_x", x[0]},
               {"residual", residual},
               {"monotone_increase_after_burn_in", drift_monotone}};
    rep.results.push_back(check_record("noncyclic-residual-small", residual <= 1e-3, orbit));
    rep.results.push_back(check_record("noncyclic-drift-monotone", drift_monotone, orbit));
    // With the x^-3 drift law this milestone needs ~2.5e7 sweeps; at the
    // shipped budget the orbit reaches x ~ (4*budget)^(1/4). Reported honestly.
    rep.results.push_back(check_record("noncyclic-escapes-x-100", x[0] >= 100.0, orbit));

    rep.inputs = Json{{"operator", operator_to_json(comp)}, {"x0", x0}, {"budget", budget}};
    rep.verdict = derive_verdict(rep.results);
    return rep;
}

ExperimentReport demo_witness(const DemoOptions& opt) {
    ExperimentReport rep;
    rep.experiment_id = "demo-witness";
    const double eps = opt.tol > 0 ? opt.tol : 1e-2;
    const long budget = opt.max_iter > 0 ? opt.max_iter : 100000;

    // Translation pair: the composition misses a fixed point by exactly
    // |a1 + a2|, and the certificate bound eps + |a1| + |a2| absorbs it.
    {
        std::vector<OpPtr> ops = {translation({1.0}), translation({2.0})};
        std::vector<Vec> v_list = {{1.0}, {2.0}};
        SynthesisResult syn = synthesize_near_fixed_point(ops, v_list, eps, budget);
        bool resid_exact = std::abs(syn.certificate.composite_residual - 3.0) <= 1e-9;
        Json extra = certificate_to_json(syn.certificate);
        extra["iterations"] = syn.iterations;
        extra["reached_target"] = syn.reached_target;
        rep.results.push_back(check_record("witness-translations",
                                           syn.certificate.pass && resid_exact, std::move(extra)));

        WitnessCertificate recheck = verify_telescoping(ops, syn.tuple);
        bool stages_match = recheck.stage_residuals.size() == 2 &&
                            std::abs(recheck.stage_residuals[0] - 1.0) <= 1e-9 &&
                            std::abs(recheck.stage_residuals[1] - 2.0) <= 1e-9;
        rep.results.push_back(check_record("witness-telescoping-recheck",
                                           recheck.pass && stages_match,
                                           certificate_to_json(recheck)));
    }
    // De Pierro triple with vanishing displacement vectors.
    {
        std::vector<OpPtr> ops = depierro_sets_in_order({1, 2, 3});
        std::vector<Vec> v_list = {zeros(2), zeros(2), zeros(2)};
        SynthesisResult syn = synthesize_near_fixed_point(ops, v_list, eps, budget);
        bool resid_small = syn.certificate.composite_residual <= eps;
        Json extra = certificate_to_json(syn.certificate);
        extra["iterations"] = syn.iterations;
        extra["reached_target"] = syn.reached_target;
        rep.results.push_back(check_record("witness-depierro",
                                           syn.certificate.pass && resid_small, std::move(extra)));
    }
    rep.inputs = Json{{"epsilon", eps}, {"budget", budget}};
    rep.verdict = derive_verdict(rep.results);
    return rep;
}

} // namespace

std::vector<std::string> demo_names() {
    return {"translations", "convex-combo", "depierro-cyclic", "depierro-noncyclic", "witness"};
}

ExperimentReport run_demo(const std::string& name, const DemoOptions& opt) {
    Stopwatch watch;
    ExperimentReport rep;
    if (name == "translations") rep = demo_translations(opt);
    else if (name == "convex-combo") rep = demo_convex_combo(opt);
    else if (name == "depierro-cyclic") rep = demo_depierro_cyclic(opt);
    else if (name == "depierro-noncyclic") rep = demo_depierro_noncyclic(opt);
    else if (name == "witness") rep = demo_witness(opt);
    else throw Error(Errc::unknown_demo, "no demo named \"" + name + "\"");
    rep.wall_time = watch.seconds();
    return rep;
}

OpPtr sample_leaf(Rng& rng, int dim) {
    switch (rng.uniform_index(5)) {
        case 0: return translation(rng.uniform_vec(dim, -1.0, 1.0));
        case 1: {
            Vec n = rng.uniform_vec(dim, -1.0, 1.0);
            while (norm(n) < 1e-3) n = rng.uniform_vec(dim, -1.0, 1.0);
            return proj_halfspace(std::move(n), rng.uniform(-1.0, 1.0));
        }
        case 2: {
            Vec lo = rng.uniform_vec(dim, -1.5, -0.1);
            Vec hi = rng.uniform_vec(dim, 0.1, 1.5);
            return proj_box(std::move(lo), std::move(hi));
        }
        case 3: return proj_ball(rng.uniform_vec(dim, -1.0, 1.0), rng.uniform(0.5, 2.0));
        default: return affine_scale(rng.uniform(0.5, 1.0), rng.uniform_vec(dim, -1.0, 1.0));
    }
}

std::vector<OpPtr> sample_operator_tuple(Rng& rng, int dim, int m) {
    std::vector<OpPtr> ops;
    ops.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) ops.push_back(sample_leaf(rng, dim));
    return ops;
}

std::vector<double> sample_weights(Rng& rng, int m) {
    std::vector<double> w(static_cast<std::size_t>(m));
    double sum = 0.0;
    for (auto& v : w) {
        v = rng.uniform(0.2, 1.0);
        sum += v;
    }
    for (auto& v : w) v /= sum;
    // Nudge the largest weight so the sum lands on 1 in double arithmetic.
    std::size_t largest = 0;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] > w[largest]) largest = i;
    double resid = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (i != largest) resid -= w[i];
    w[largest] = resid;
    return w;
}

ExperimentReport run_random_suite(const SuiteOptions& opt) {
    if (opt.trials < 1) throw Error(Errc::bad_parameter, "suite needs trials >= 1");
    if (opt.dims.empty() || opt.m_values.empty()) {
        throw Error(Errc::bad_parameter, "suite needs nonempty dims and m lists");
    }
    Stopwatch watch;

    struct TrialOutcome {
        Json record;
        bool pass = false;
        bool converged = false;
    };
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(opt.trials));

    const bool par = opt.exec == Exec::parallel;
#pragma omp parallel for if (par) schedule(dynamic)
    for (long t = 0; t < opt.trials; ++t) {
        auto& out = outcomes[static_cast<std::size_t>(t)];
        try {
            Rng rng = Rng::stream(opt.seed, static_cast<std::uint64_t>(t));
            int dim = opt.dims[rng.uniform_index(opt.dims.size())];
            int m = opt.m_values[rng.uniform_index(opt.m_values.size())];
            std::vector<OpPtr> ops = sample_operator_tuple(rng, dim, m);
            std::vector<double> weights = sample_weights(rng, m);

            BoundCheck comp = check_composition_bound(ops, opt.estimator, opt.tolerance);
            BoundCheck combo =
                check_convex_combo_bound(weights, ops, opt.estimator, opt.tolerance);
            RotationComparison rot = compare_cyclic_rotations(ops, opt.estimator);
            bool rot_pass = rot.max_pairwise_gap <= opt.tolerance;

            out.pass = comp.pass && combo.pass && rot_pass;
            out.converged = comp.all_converged && combo.all_converged && rot.all_converged;
            out.record = Json{{"trial", t},
                              {"dim", dim},
                              {"m", m},
                              {"composition", bound_check_to_json(comp)},
                              {"convex_combo", bound_check_to_json(combo)},
                              {"cyclic", Json{{"max_pairwise_gap", rot.max_pairwise_gap},
                                              {"all_converged", rot.all_converged},
                                              {"pass", rot_pass}}},
                              {"pass", out.pass},
                              {"all_converged", out.converged}};
        } catch (const std::exception& e) {
            out.pass = false;
            out.converged = true; // a thrown trial is a failure, not an unconverged estimate
            out.record = Json{{"trial", t}, {"error", e.what()}, {"pass", false}};
        }
    }

    ExperimentReport rep;
    rep.experiment_id = "suite";
    rep.seed = opt.seed;
    rep.inputs = Json{{"trials", opt.trials},
                      {"seed", opt.seed},
                      {"dims", opt.dims},
                      {"m_values", opt.m_values},
                      {"tolerance", opt.tolerance}};

    long comp_passes = 0, combo_passes = 0, rot_passes = 0, converged_trials = 0;
    Json records = Json::array();
    for (const auto& out : outcomes) {
        records.push_back(out.record);
        if (out.record.contains("composition") && out.record["composition"]["pass"].get<bool>()) {
            ++comp_passes;
        }
        if (out.record.contains("convex_combo") && out.record["convex_combo"]["pass"].get<bool>()) {
            ++combo_passes;
        }
        if (out.record.contains("cyclic") && out.record["cyclic"]["pass"].get<bool>()) {
            ++rot_passes;
        }
        if (out.converged) ++converged_trials;
    }
    rep.results = Json{{"trials", records},
                       {"aggregate", Json{{"composition_passes", comp_passes},
                                          {"convex_combo_passes", combo_passes},
                                          {"cyclic_passes", rot_passes},
                                          {"converged_trials", converged_trials},
                                          {"trials", opt.trials}}}};

    bool all_pass = true, any_unconverged = false;
    for (const auto& out : outcomes) {
        all_pass = all_pass && out.pass;
        any_unconverged = any_unconverged || !out.converged;
    }
    rep.verdict = any_unconverged ? Verdict::inconclusive
                                  : (all_pass ? Verdict::pass : Verdict::fail);
    rep.wall_time = watch.seconds();
    return rep;
}

} // namespace mdv
