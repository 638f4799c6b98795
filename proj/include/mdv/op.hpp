#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "mdv/error.hpp"
#include "mdv/vec.hpp"

namespace mdv {

class MonotoneSpec;
using MonotoneSpecPtr = std::shared_ptr<const MonotoneSpec>;

class Op;
using OpPtr = std::shared_ptr<const Op>;

// Expression-tree nodes. Leaves are firmly nonexpansive by construction
// (projectors onto closed convex sets, resolvents, x -> beta*x - a with
// beta in [0,1]); interior nodes combine children.
namespace nodes {

struct Translation {
    Vec a; // x -> x - a
};

struct AffineScale {
    double beta = 1.0; // x -> beta*x - a, beta in [0,1]
    Vec a;
};

struct ProjHyperplane {
    Vec normal;
    double offset = 0.0;
    double inv_norm_sq = 0.0; // cached 1/||normal||^2
};

struct ProjHalfspace {
    Vec normal; // {x : <normal,x> <= offset}
    double offset = 0.0;
    double inv_norm_sq = 0.0;
};

struct ProjBox {
    Vec lo;
    Vec hi;
};

struct ProjBall {
    Vec center;
    double radius = 1.0;
};

// {(x, y) : y >= 1/x > 0} in R^2
struct ProjHyperbolaEpi {};

struct Resolvent {
    MonotoneSpecPtr spec;
};

// Applies children[i] to the i-th slice of a concatenated vector.
// Internal combinator; it has no form in the JSON operator schema.
struct BlockDiag {
    std::vector<OpPtr> children;
};

struct Compose {
    std::vector<OpPtr> children; // first listed is applied first
};

struct ConvexCombo {
    std::vector<double> weights;
    std::vector<OpPtr> children;
};

struct Averaged {
    double alpha = 0.5; // (1-alpha)*Id + alpha*inner
    OpPtr inner;
};

} // namespace nodes

struct OpMaker;

// Immutable operator expression. Values are safe to share across threads;
// evaluation is pure.
class Op {
public:
    using Node = std::variant<nodes::Translation, nodes::AffineScale, nodes::ProjHyperplane,
                              nodes::ProjHalfspace, nodes::ProjBox, nodes::ProjBall,
                              nodes::ProjHyperbolaEpi, nodes::Resolvent, nodes::BlockDiag,
                              nodes::Compose, nodes::ConvexCombo, nodes::Averaged>;

    int dim() const noexcept { return dim_; }
    const Node& node() const noexcept { return node_; }

    // Guaranteed averagedness constant, derived structurally. A value of 1
    // means "nonexpansive at best"; anything < 1 licenses plain Picard
    // iteration in the displacement estimator.
    double averaged_alpha() const noexcept { return alpha_; }

    // Structural Lipschitz bound (product over compositions, weighted sum
    // over combinations). Exceeds 1 only for operators built through the
    // test-only backdoor.
    double lipschitz_bound() const noexcept { return lip_; }

    bool is_firmly_nonexpansive() const noexcept {
        return alpha_ <= 0.5 + 1e-12 && lip_ <= 1.0 + 1e-12;
    }

private:
    friend struct OpMaker;
    Op(Node node, int dim, double alpha, double lip)
        : node_(std::move(node)), dim_(dim), alpha_(alpha), lip_(lip) {}

    Node node_;
    int dim_;
    double alpha_;
    double lip_;
};

// Validating constructors.
OpPtr translation(Vec a);
OpPtr affine_scale(double beta, Vec a);
OpPtr proj_hyperplane(Vec normal, double offset);
OpPtr proj_halfspace(Vec normal, double offset);
OpPtr proj_box(Vec lo, Vec hi);
OpPtr proj_ball(Vec center, double radius);
OpPtr proj_hyperbola_epi();
OpPtr resolvent(MonotoneSpecPtr spec);
OpPtr block_diag(std::vector<OpPtr> children);
OpPtr compose(std::vector<OpPtr> children);
OpPtr convex_combination(std::vector<double> weights, std::vector<OpPtr> children);
OpPtr averaged(double alpha, OpPtr inner);

// Evaluates T(x). Pure; throws Errc::dimension_mismatch on bad input.
Vec evaluate(const Op& op, const Vec& x);
inline Vec evaluate(const OpPtr& op, const Vec& x) { return evaluate(*op, x); }

// Averagedness constant of the composition of an a-averaged and a b-averaged
// map (equals m/(m+1) after folding m firmly nonexpansive factors).
double compose_alpha(double a, double b);

} // namespace mdv
