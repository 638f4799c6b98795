#pragma once

#include <string>
#include <vector>

#include "mdv/op.hpp"

namespace mdv {

// A point of the product space (R^d)^m, m >= 2.
struct ProductPoint {
    std::vector<Vec> parts;
};

ProductPoint zero_product_point(int m, int dim);
double product_dist(const ProductPoint& a, const ProductPoint& b);

// (x_1, ..., x_m) -> (x_m, x_1, ..., x_{m-1}); exact permutation.
ProductPoint cyclic_shift(const ProductPoint& x);

// Componentwise application: part i goes through ops[i].
ProductPoint block_apply(const std::vector<OpPtr>& ops, const ProductPoint& x);

struct WitnessCertificate {
    Vec x0;                              // extracted point (last part of the tuple)
    double composite_residual = 0.0;     // ||x0 - T_m ... T_1 x0||
    std::vector<double> stage_residuals; // ||T_i x_{i-1} - x_i||, x_0 := x_m
    double bound_rhs = 0.0;
    bool pass = false;
};

struct SynthesisResult {
    ProductPoint tuple;
    WitnessCertificate certificate;
    long iterations = 0;
    bool reached_target = false;     // product residual <= epsilon/sqrt(m) within budget
    double product_residual = 0.0;   // final ||x - S x|| in the product norm
    std::vector<double> residual_history;
};

// Builds a near-fixed point of the composition by damped iteration of the
// nonexpansive self-map S: x -> v + T(R x) from the zero tuple, then emits a
// certificate checking composite_residual <= epsilon + sum_i ||v_i||.
// v_list holds the (exact or estimated) displacement vectors of ops.
SynthesisResult synthesize_near_fixed_point(const std::vector<OpPtr>& ops,
                                            const std::vector<Vec>& v_list, double epsilon,
                                            long budget);

// Pure measurement of the telescoping chain at a given tuple: the composite
// residual never exceeds the sum of stage residuals (+1e-10 slack).
WitnessCertificate verify_telescoping(const std::vector<OpPtr>& ops, const ProductPoint& x);

// CSV with one row per part: part,c0,c1,...
std::string to_csv(const ProductPoint& x);

} // namespace mdv
