#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mdv/demos.hpp"
#include "mdv/json_io.hpp"
#include "mdv/trace.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 3;

int verdict_exit(mdv::Verdict v) {
    switch (v) {
        case mdv::Verdict::pass: return kExitPass;
        case mdv::Verdict::fail: return kExitFail;
        case mdv::Verdict::inconclusive: return kExitInconclusive;
    }
    return kExitFail;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mdv::Error(mdv::Errc::io_error, "cannot write " + path);
    out << body;
}

void emit_report(const mdv::ExperimentReport& rep, const std::string& json_path) {
    if (!json_path.empty()) {
        write_file(json_path, mdv::report_to_json(rep).dump(2) + "\n");
    }
    std::printf("%s: %s (%.3fs)\n", rep.experiment_id.c_str(), mdv::verdict_name(rep.verdict),
                rep.wall_time);
    for (const auto& rec : rep.results.is_array() ? rep.results
                                                  : mdv::Json::array()) {
        if (rec.contains("name") && rec.contains("pass")) {
            std::printf("  [%s] %s\n", rec["pass"].get<bool>() ? "ok" : "FAIL",
                        rec["name"].get<std::string>().c_str());
        }
    }
}

mdv::Vec parse_point(const std::string& text) {
    mdv::Vec out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw mdv::Error(mdv::Errc::bad_usage, "cannot parse coordinate \"" + tok + "\"");
        }
    }
    if (out.empty()) throw mdv::Error(mdv::Errc::bad_usage, "empty point");
    return out;
}

bool is_usage_error(mdv::Errc c) {
    switch (c) {
        case mdv::Errc::malformed_json:
        case mdv::Errc::unknown_type:
        case mdv::Errc::missing_field:
        case mdv::Errc::bad_field:
        case mdv::Errc::weight_sum:
        case mdv::Errc::weight_range:
        case mdv::Errc::dimension_mismatch:
        case mdv::Errc::bad_parameter:
        case mdv::Errc::unknown_demo:
        case mdv::Errc::bad_usage:
        case mdv::Errc::io_error:
            return true;
        default:
            return false;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Displacement-vector laboratory for firmly nonexpansive operators"};
    app.require_subcommand(1);

    long max_iter = 0;
    double tol = 0.0;
    std::string json_path;
    app.add_option("--max-iter", max_iter, "Iteration budget override");
    app.add_option("--tol", tol, "Stopping tolerance override");
    app.add_option("--json", json_path, "Write the report as JSON to this path");

    auto* demo_cmd = app.add_subcommand("demo", "Run a named built-in experiment");
    demo_cmd->fallthrough();
    std::string demo_name;
    demo_cmd->add_option("name", demo_name, "One of: translations, convex-combo, depierro-cyclic, depierro-noncyclic, witness")
        ->required();

    auto* suite_cmd = app.add_subcommand("suite", "Randomized bound-verification suite");
    suite_cmd->fallthrough();
    long trials = 100;
    std::uint64_t seed = 42;
    std::vector<int> dims = {1, 2, 5};
    std::vector<int> ms = {2, 3, 4};
    bool serial = false;
    suite_cmd->add_option("--trials", trials, "Number of trials");
    suite_cmd->add_option("--seed", seed, "Seed");
    suite_cmd->add_option("--dims", dims, "Candidate dimensions");
    suite_cmd->add_option("--m", ms, "Candidate tuple sizes");
    suite_cmd->add_flag("--serial", serial, "Run trials serially");

    auto* est_cmd = app.add_subcommand("estimate", "Estimate the minimal displacement vector");
    est_cmd->fallthrough();
    std::string op_path, x0_text, resid_csv;
    est_cmd->add_option("--op", op_path, "Operator JSON file")->required();
    est_cmd->add_option("--x0", x0_text, "Start point, comma separated");
    est_cmd->add_option("--csv", resid_csv, "Stream residuals to CSV (n,residual,coords...)");

    auto* trace_cmd = app.add_subcommand("trace", "Record stage-by-stage orbits (CSV/SVG)");
    trace_cmd->fallthrough();
    std::string t_op_path, t_csv, t_svg, t_x0 = "-3,0.5";
    int t_steps = 30;
    trace_cmd->add_option("--op", t_op_path, "Operator JSON file")->required();
    trace_cmd->add_option("--steps", t_steps, "Number of sweeps");
    trace_cmd->add_option("--csv", t_csv, "CSV output path");
    trace_cmd->add_option("--svg", t_svg, "SVG output path");
    trace_cmd->add_option("--x0", t_x0, "Start point, comma separated");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*demo_cmd) {
            mdv::DemoOptions opt;
            opt.max_iter = max_iter;
            opt.tol = tol;
            mdv::ExperimentReport rep = mdv::run_demo(demo_name, opt);
            emit_report(rep, json_path);
            return verdict_exit(rep.verdict);
        }
        if (*suite_cmd) {
            mdv::SuiteOptions opt;
            opt.trials = trials;
            opt.seed = seed;
            opt.dims = dims;
            opt.m_values = ms;
            if (max_iter > 0) opt.estimator.max_iter = max_iter;
            if (tol > 0) opt.estimator.tol_residual_change = tol;
            if (serial) opt.exec = mdv::Exec::serial;
            mdv::ExperimentReport rep = mdv::run_random_suite(opt);
            emit_report(rep, json_path);
            const auto& agg = rep.results["aggregate"];
            std::printf("  composition %ld/%ld, combination %ld/%ld, cyclic %ld/%ld\n",
                        agg["composition_passes"].get<long>(), trials,
                        agg["convex_combo_passes"].get<long>(), trials,
                        agg["cyclic_passes"].get<long>(), trials);
            return verdict_exit(rep.verdict);
        }
        if (*est_cmd) {
            mdv::OpPtr op = mdv::parse_operator_file(op_path);
            mdv::EstimatorConfig cfg;
            if (max_iter > 0) cfg.max_iter = max_iter;
            if (tol > 0) cfg.tol_residual_change = tol;
            if (!x0_text.empty()) cfg.x0 = parse_point(x0_text);
            std::ofstream csv;
            if (!resid_csv.empty()) {
                csv.open(resid_csv, std::ios::binary);
                if (!csv) throw mdv::Error(mdv::Errc::io_error, "cannot write " + resid_csv);
                csv << "n,residual";
                for (int k = 0; k < op->dim(); ++k) csv << ",c" << k;
                csv << "\n";
                cfg.residual_sink = [&csv](long n, double r, const mdv::Vec& x) {
                    char buf[64];
                    csv << n;
                    std::snprintf(buf, sizeof buf, ",%.17g", r);
                    csv << buf;
                    for (double c : x) {
                        std::snprintf(buf, sizeof buf, ",%.17g", c);
                        csv << buf;
                    }
                    csv << "\n";
                };
            }
            mdv::DisplacementEstimate est = mdv::estimate_displacement(op, cfg);
            mdv::Json j = mdv::estimate_to_json(est, false);
            if (!json_path.empty()) {
                write_file(json_path, mdv::estimate_to_json(est).dump(2) + "\n");
            }
            std::printf("||v_hat|| = %.12g, upper bound %.12g, iterations %ld, %s\n",
                        mdv::norm(est.v_hat), est.upper_bound, est.iterations,
                        est.converged ? "converged" : "budget exhausted");
            return est.converged ? kExitPass : kExitInconclusive;
        }
        if (*trace_cmd) {
            mdv::OpPtr op = mdv::parse_operator_file(t_op_path);
            mdv::emit_trace(op, parse_point(t_x0), t_steps, t_csv, t_svg);
            return kExitPass;
        }
    } catch (const mdv::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return is_usage_error(e.code()) ? kExitUsage : kExitFail;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFail;
    }
    return kExitUsage;
}
