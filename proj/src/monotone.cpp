#include "mdv/monotone.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mdv/rng.hpp"

namespace mdv {

struct MonotoneSpecMaker {
    static MonotoneSpecPtr make(MonotoneSpec::Kind kind, int dim) {
        return MonotoneSpecPtr(new MonotoneSpec(std::move(kind), dim));
    }
};

namespace monotone {

struct PsdSolver {
    Eigen::MatrixXd m;                        // M itself
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;  // factorization of I + M
};

} // namespace monotone

namespace {

void require_finite(const Vec& v, const char* what) {
    if (v.empty()) throw Error(Errc::bad_parameter, std::string(what) + " must be nonempty");
    if (!all_finite(v)) throw Error(Errc::bad_parameter, std::string(what) + " has non-finite entries");
}

Vec soft_threshold(const Vec& x, double w) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double m = std::abs(x[i]) - w;
        r[i] = m > 0.0 ? std::copysign(m, x[i]) : 0.0;
    }
    return r;
}

Vec clamp_to_box(const Vec& x, const Vec& lo, const Vec& hi) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::clamp(x[i], lo[i], hi[i]);
    return r;
}

Vec solve_linear(const monotone::PsdLinear& n, const Vec& rhs) {
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    Eigen::VectorXd y = n.solver->lu.solve(b);
    double resid = ((Eigen::MatrixXd::Identity(y.size(), y.size()) + n.solver->m) * y - b).norm();
    if (!(resid <= 1e-12 * std::max(1.0, b.norm()))) {
        throw Error(Errc::numerical_failure,
                    "linear resolvent residual " + std::to_string(resid));
    }
    return Vec(y.data(), y.data() + y.size());
}

} // namespace

MonotoneSpecPtr constant_map(Vec c) {
    require_finite(c, "constant map value");
    int d = static_cast<int>(c.size());
    return MonotoneSpecMaker::make(monotone::ConstantMap{std::move(c)}, d);
}

MonotoneSpecPtr psd_linear(std::vector<double> matrix, int dim) {
    if (dim < 1 || dim > 64) throw Error(Errc::bad_parameter, "psd_linear supports 1 <= d <= 64");
    if (matrix.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
        throw Error(Errc::bad_parameter, "psd_linear matrix has wrong size");
    }
    for (double v : matrix) {
        if (!std::isfinite(v)) throw Error(Errc::bad_parameter, "psd_linear matrix not finite");
    }
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = matrix[static_cast<std::size_t>(i) * dim + j];

    // Sampled monotonicity check: <x, Mx> >= -1e-10 on seeded unit vectors.
    Rng rng = Rng::stream(0x5ca1ab1e, static_cast<std::uint64_t>(dim));
    for (int s = 0; s < 256; ++s) {
        Eigen::VectorXd x(dim);
        for (int i = 0; i < dim; ++i) x(i) = rng.uniform(-1.0, 1.0);
        double nx = x.norm();
        if (nx == 0.0) continue;
        x /= nx;
        if (x.dot(m * x) < -1e-10) {
            throw Error(Errc::bad_parameter, "psd_linear matrix is not monotone: <x,Mx> < 0");
        }
    }

    auto solver = std::make_shared<monotone::PsdSolver>();
    solver->m = m;
    solver->lu = Eigen::PartialPivLU<Eigen::MatrixXd>(
        Eigen::MatrixXd::Identity(dim, dim) + m);
    return MonotoneSpecMaker::make(monotone::PsdLinear{std::move(matrix), std::move(solver)}, dim);
}

MonotoneSpecPtr subdiff_abs(double weight, int dim) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw Error(Errc::bad_parameter, "subdiff_abs weight must be >= 0");
    }
    if (dim < 1) throw Error(Errc::bad_parameter, "subdiff_abs dim must be >= 1");
    return MonotoneSpecMaker::make(monotone::SubdiffAbs{weight, dim}, dim);
}

MonotoneSpecPtr normal_cone_box(Vec lo, Vec hi) {
    require_finite(lo, "box lower corner");
    require_finite(hi, "box upper corner");
    if (lo.size() != hi.size()) throw Error(Errc::dimension_mismatch, "box corners differ in dim");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (lo[i] > hi[i]) throw Error(Errc::bad_parameter, "box has lo > hi");
    }
    int d = static_cast<int>(lo.size());
    return MonotoneSpecMaker::make(monotone::NormalConeBox{std::move(lo), std::move(hi)}, d);
}

MonotoneSpecPtr shift_operator(MonotoneSpecPtr spec, Vec v) {
    if (!spec) throw Error(Errc::bad_parameter, "shift of a null spec");
    require_finite(v, "shift vector");
    if (static_cast<int>(v.size()) != spec->dim()) {
        throw Error(Errc::dimension_mismatch, "shift vector dim " + std::to_string(v.size()) +
                                                  ", spec dim " + std::to_string(spec->dim()));
    }
    int d = spec->dim();
    return MonotoneSpecMaker::make(monotone::Shifted{std::move(spec), std::move(v)}, d);
}

Vec resolve(const MonotoneSpec& spec, const Vec& x) {
    if (static_cast<int>(x.size()) != spec.dim()) {
        throw Error(Errc::dimension_mismatch, "resolvent dim " + std::to_string(spec.dim()) +
                                                  ", point dim " + std::to_string(x.size()));
    }
    return std::visit(
        [&](const auto& n) -> Vec {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, monotone::ConstantMap>) {
                return sub(x, n.c);
            } else if constexpr (std::is_same_v<T, monotone::PsdLinear>) {
                return solve_linear(n, x);
            } else if constexpr (std::is_same_v<T, monotone::SubdiffAbs>) {
                return soft_threshold(x, n.weight);
            } else if constexpr (std::is_same_v<T, monotone::NormalConeBox>) {
                return clamp_to_box(x, n.lo, n.hi);
            } else {
                static_assert(std::is_same_v<T, monotone::Shifted>);
                // J of -v + A(.-v) is v + J_A, pointwise in x.
                return add(n.v, resolve(*n.inner, x));
            }
        },
        spec.kind());
}

namespace detail {

Vec invert_shifted_resolvent(const MonotoneSpec& base, const Vec& w, const Vec& x) {
    return std::visit(
        [&](const auto& n) -> Vec {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, monotone::ConstantMap>) {
                // y + (-w + c) = x
                return sub(add(x, w), n.c);
            } else if constexpr (std::is_same_v<T, monotone::PsdLinear>) {
                // y + (-w + M(y - w)) = x  =>  (I + M) y = x + w + M w
                Eigen::Map<const Eigen::VectorXd> xe(x.data(), static_cast<Eigen::Index>(x.size()));
                Eigen::Map<const Eigen::VectorXd> we(w.data(), static_cast<Eigen::Index>(w.size()));
                Eigen::VectorXd rhs = xe + we + n.solver->m * we;
                Eigen::MatrixXd lhs =
                    Eigen::MatrixXd::Identity(xe.size(), xe.size()) + n.solver->m;
                Eigen::VectorXd y = lhs.fullPivLu().solve(rhs);
                return Vec(y.data(), y.data() + y.size());
            } else if constexpr (std::is_same_v<T, monotone::SubdiffAbs>) {
                // Componentwise case split of y - w_i + omega * sgn(y - w_i) = x_i.
                Vec y(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) {
                    double omega = n.weight;
                    if (x[i] > omega) y[i] = x[i] + w[i] - omega;
                    else if (x[i] < -omega) y[i] = x[i] + w[i] + omega;
                    else y[i] = w[i];
                }
                return y;
            } else if constexpr (std::is_same_v<T, monotone::NormalConeBox>) {
                // z + N_box(z) = x with z = y - w reduces to a clamp, then add w.
                Vec y(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) {
                    y[i] = w[i] + std::clamp(x[i], n.lo[i], n.hi[i]);
                }
                return y;
            } else {
                static_assert(std::is_same_v<T, monotone::Shifted>);
                // -w + A~(.-w) with A~ = -u + A(.-u) collapses to shift w + u.
                return invert_shifted_resolvent(*n.inner, add(w, n.v), x);
            }
        },
        base.kind());
}

} // namespace detail

ShiftVerification verify_resolvent_shift(const MonotoneSpecPtr& spec, const Vec& v, long samples,
                                         std::uint64_t seed, double box_radius) {
    if (!spec) throw Error(Errc::bad_parameter, "verify_resolvent_shift: null spec");
    if (static_cast<int>(v.size()) != spec->dim()) {
        throw Error(Errc::dimension_mismatch, "shift vector dim mismatch");
    }
    ShiftVerification out;
    out.samples = samples;
    for (long s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
        Vec x = rng.uniform_vec(spec->dim(), -box_radius, box_radius);
        Vec lhs = detail::invert_shifted_resolvent(*spec, v, x);
        Vec rhs = add(v, resolve(*spec, x));
        for (std::size_t i = 0; i < x.size(); ++i) {
            out.max_abs_error = std::max(out.max_abs_error, std::abs(lhs[i] - rhs[i]));
        }
    }
    return out;
}

BlockOperatorSpec make_block(std::vector<MonotoneSpecPtr> blocks) {
    if (blocks.size() < 2) throw Error(Errc::bad_parameter, "block needs at least 2 parts");
    int d = blocks.front() ? blocks.front()->dim() : 0;
    for (const auto& b : blocks) {
        if (!b) throw Error(Errc::bad_parameter, "block part is null");
        if (b->dim() != d) throw Error(Errc::dimension_mismatch, "block parts differ in dim");
    }
    return BlockOperatorSpec{std::move(blocks)};
}

OpPtr block_resolvent(const BlockOperatorSpec& block) {
    if (block.blocks.size() < 2) throw Error(Errc::bad_parameter, "block needs at least 2 parts");
    std::vector<OpPtr> parts;
    parts.reserve(block.blocks.size());
    for (const auto& b : block.blocks) parts.push_back(resolvent(b));
    return block_diag(std::move(parts));
}

} // namespace mdv
