#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mdv/op.hpp"

namespace mdv {

struct EstimatorConfig {
    long max_iter = 200000;
    // The stopping rule compares difference VECTORS a window apart, not their
    // norms: norms can plateau while the direction still rotates.
    double tol_residual_change = 1e-9;
    int window = 100;
    long record_every = 1;
    std::optional<Vec> x0; // origin when unset
    // Optional per-record callback (iteration, residual, iterate).
    std::function<void(long, double, const Vec&)> residual_sink;
};

struct DisplacementEstimate {
    Vec v_hat;                           // last successive difference x_N - x_{N+1}
    double upper_bound = 0.0;            // ||x_N - T x_N||, certified bound on ||v_T||
    std::vector<double> residual_history;
    long iterations = 0;
    bool converged = false;
    Vec final_iterate;
};

// Picard iteration of the (averaged) operator; the successive difference
// converges in norm to the minimal displacement vector. Operators without a
// structural averagedness guarantee are iterated as (Id+T)/2 and the result
// rescaled by 2.
DisplacementEstimate estimate_displacement(const OpPtr& op, const EstimatorConfig& cfg = {});

// Closed form where derivable structurally: semantic translations (including
// compositions/combinations of translations) return their displacement; a
// structural Lipschitz bound < 1 forces 0. Everything else is unknown.
std::optional<Vec> exact_displacement(const OpPtr& op);

// Displacement of op when op reduces to a pure translation x -> x - a.
std::optional<Vec> translation_displacement(const OpPtr& op);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // rhs + tolerance - lhs
    double tolerance = 0.0;
    bool pass = false;
    bool all_converged = true;
    Vec composite_displacement;
    std::vector<Vec> child_displacements;
};

// ||v of the composition|| <= sum_i ||v_i||, estimates on the left, exact
// values where available on the right.
BoundCheck check_composition_bound(const std::vector<OpPtr>& ops, const EstimatorConfig& cfg = {},
                                   double tolerance = 5e-3);

// ||v of sum_i w_i T_i|| <= ||sum_i w_i v_i|| (norm of the weighted sum of
// vectors, not the weighted sum of norms).
BoundCheck check_convex_combo_bound(const std::vector<double>& weights,
                                    const std::vector<OpPtr>& ops, const EstimatorConfig& cfg = {},
                                    double tolerance = 5e-3);

struct RotationComparison {
    std::vector<Vec> estimates; // one per cyclic rotation of the composition
    std::vector<bool> converged;
    double max_pairwise_gap = 0.0;
    bool all_converged = true;
};

RotationComparison compare_cyclic_rotations(const std::vector<OpPtr>& ops,
                                            const EstimatorConfig& cfg = {});

struct AttainmentDiagnosis {
    bool iterates_bounded = true;
    double orbit_radius = 0.0;
    double fixed_point_residual = 0.0;
    Vec final_iterate;
    long iterations = 0;
};

// Iterates x -> v_hat + T x; a bounded orbit with a small residual is
// evidence that the displacement is attained, divergence is evidence against.
// Heuristic by design, never a proof.
AttainmentDiagnosis diagnose_attainment(const OpPtr& op, const Vec& v_hat,
                                        const EstimatorConfig& cfg = {},
                                        double radius_limit = 1e6);

} // namespace mdv
