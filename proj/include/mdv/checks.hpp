#pragma once

#include <cstdint>

#include "mdv/op.hpp"

namespace mdv {

enum class Exec { serial, parallel };

struct CheckReport {
    long samples = 0;
    long violations = 0;
    // min over samples of the signed slack of the tested inequality;
    // a violation is worst_margin < -tolerance at some sample.
    double worst_margin = 0.0;
};

// ||Tx - Ty||^2 <= <x - y, Tx - Ty> + tol on seeded pairs from
// [-box_radius, box_radius]^d. Parallel and serial sweeps agree bitwise.
CheckReport check_firm_nonexpansive(const OpPtr& op, long sample_count, std::uint64_t seed,
                                    double box_radius, Exec exec = Exec::parallel,
                                    double tol = 1e-10);

// ||Tx-Ty||^2 + ((1-alpha)/alpha) ||(Id-T)x - (Id-T)y||^2 <= ||x-y||^2 + tol.
CheckReport check_averaged(const OpPtr& op, double alpha, long sample_count, std::uint64_t seed,
                           double box_radius = 5.0, Exec exec = Exec::parallel, double tol = 1e-10);

// ||Tx - Ty|| <= ||x - y|| + tol.
CheckReport check_nonexpansive(const OpPtr& op, long sample_count, std::uint64_t seed,
                               double box_radius = 5.0, Exec exec = Exec::parallel,
                               double tol = 1e-10);

// ||T(Tx) - Tx|| <= tol (projector idempotence).
CheckReport check_idempotent(const OpPtr& op, long sample_count, std::uint64_t seed,
                             double box_radius = 5.0, Exec exec = Exec::parallel,
                             double tol = 1e-12);

} // namespace mdv
