#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdv/checks.hpp"
#include "mdv/estimator.hpp"
#include "mdv/json_io.hpp"
#include "mdv/rng.hpp"

namespace mdv {

enum class Verdict { pass, fail, inconclusive };

const char* verdict_name(Verdict v);

struct ExperimentReport {
    std::string experiment_id;
    std::uint64_t seed = 0;
    Json inputs;    // echo of the operators / parameters
    Json results;   // array of named check records
    Verdict verdict = Verdict::pass;
    double wall_time = 0.0; // seconds; excluded from determinism comparisons
};

// include_wall_time=false yields the canonical form used for byte-identity checks.
Json report_to_json(const ExperimentReport& r, bool include_wall_time = true);

struct DemoOptions {
    long max_iter = 0;   // 0 = demo default
    double tol = 0.0;    // 0 = demo default
};

// Demos: "translations", "convex-combo", "depierro-cyclic",
// "depierro-noncyclic", "witness". Fixed built-in parameters; the verdict is
// recomputable from the numeric fields of the report alone.
ExperimentReport run_demo(const std::string& name, const DemoOptions& opt = {});

std::vector<std::string> demo_names();

struct SuiteOptions {
    long trials = 100;
    std::uint64_t seed = 42;
    std::vector<int> dims = {1, 2, 5};
    std::vector<int> m_values = {2, 3, 4};
    double tolerance = 5e-3;
    EstimatorConfig estimator;
    Exec exec = Exec::parallel;
};

// Randomized bound suite: per trial draws a tuple of firmly nonexpansive
// operators and runs the composition bound, the convex-combination bound and
// the cyclic-rotation comparison. Deterministic given the seed, regardless of
// thread count.
ExperimentReport run_random_suite(const SuiteOptions& opt);

// Operator generator family used by the suite (and reusable in tests):
// Translation, ProjHalfspace, ProjBox, ProjBall, AffineScale(beta in [0.5,1]).
OpPtr sample_leaf(Rng& rng, int dim);
std::vector<OpPtr> sample_operator_tuple(Rng& rng, int dim, int m);
std::vector<double> sample_weights(Rng& rng, int m);

} // namespace mdv
