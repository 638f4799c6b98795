#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "mdv/op.hpp"
#include "mdv/vec.hpp"

namespace mdv {

namespace monotone {

// A x = {c}
struct ConstantMap {
    Vec c;
};

struct PsdSolver; // holds the cached factorization of I + M (see monotone.cpp)

// A x = M x with <x, Mx> >= 0 (M need not be symmetric).
struct PsdLinear {
    std::vector<double> matrix; // row-major d x d
    std::shared_ptr<const PsdSolver> solver;
};

// A = subdifferential of w * ||.||_1, separable.
struct SubdiffAbs {
    double weight = 0.0;
    int dim = 1;
};

// A = normal cone of the box [lo, hi].
struct NormalConeBox {
    Vec lo;
    Vec hi;
};

// A~ = -v + A(. - v)
struct Shifted {
    MonotoneSpecPtr inner;
    Vec v;
};

} // namespace monotone

struct MonotoneSpecMaker;

// Description of a maximally monotone operator with an evaluable resolvent.
// Immutable; resolvent evaluation is pure.
class MonotoneSpec {
public:
    using Kind = std::variant<monotone::ConstantMap, monotone::PsdLinear, monotone::SubdiffAbs,
                              monotone::NormalConeBox, monotone::Shifted>;

    int dim() const noexcept { return dim_; }
    const Kind& kind() const noexcept { return kind_; }

private:
    friend struct MonotoneSpecMaker;
    MonotoneSpec(Kind kind, int dim) : kind_(std::move(kind)), dim_(dim) {}
    Kind kind_;
    int dim_;
};

MonotoneSpecPtr constant_map(Vec c);
// matrix is row-major d x d; monotonicity (<x, Mx> >= -1e-10) is checked on
// seeded samples at construction and the factorization of I + M is cached.
MonotoneSpecPtr psd_linear(std::vector<double> matrix, int dim);
MonotoneSpecPtr subdiff_abs(double weight, int dim);
MonotoneSpecPtr normal_cone_box(Vec lo, Vec hi);

// Eq-style shift: returns the wrapper for -v + A(. - v); no evaluation.
MonotoneSpecPtr shift_operator(MonotoneSpecPtr spec, Vec v);

// J_A x = (Id + A)^{-1} x, evaluated exactly per kind. For Shifted specs this
// uses the pointwise identity J_{-v + A(.-v)} = v + J_A.
Vec resolve(const MonotoneSpec& spec, const Vec& x);

struct ShiftVerification {
    double max_abs_error = 0.0;
    long samples = 0;
};

// Checks the resolvent shift identity at seeded sample points. The left side
// is obtained by inverting Id + A~ directly (per-kind case analysis / linear
// solve), the right side by v + J_A; this keeps the check independent of the
// production path, which never inverts numerically.
ShiftVerification verify_resolvent_shift(const MonotoneSpecPtr& spec, const Vec& v, long samples,
                                         std::uint64_t seed, double box_radius = 10.0);

struct BlockOperatorSpec {
    std::vector<MonotoneSpecPtr> blocks; // all on the same dim; size >= 2
};

BlockOperatorSpec make_block(std::vector<MonotoneSpecPtr> blocks);

// Resolvent of the product operator: applies resolve(blocks[i]) to the i-th
// d-slice of a vector on R^{m*d}.
OpPtr block_resolvent(const BlockOperatorSpec& block);

namespace detail {
// Direct inversion of Id + (-v + A(.-v)); reserved for verification.
Vec invert_shifted_resolvent(const MonotoneSpec& base, const Vec& total_shift, const Vec& x);
} // namespace detail

} // namespace mdv
