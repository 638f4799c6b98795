#include "mdv/op.hpp"

#include <algorithm>
#include <cmath>

#include "mdv/hyperbola.hpp"
#include "mdv/monotone.hpp"
#include "mdv/testing.hpp"

namespace mdv {

struct OpMaker {
    static OpPtr make(Op::Node node, int dim, double alpha, double lip) {
        return OpPtr(new Op(std::move(node), dim, alpha, lip));
    }
};

namespace {

void require_finite(const Vec& v, const char* what) {
    if (v.empty()) throw Error(Errc::bad_parameter, std::string(what) + " must be nonempty");
    if (!all_finite(v)) throw Error(Errc::bad_parameter, std::string(what) + " has non-finite entries");
}

void require_same_dim(int a, int b, const char* what) {
    if (a != b) {
        throw Error(Errc::dimension_mismatch, std::string(what) + ": dims " + std::to_string(a) +
                                                  " vs " + std::to_string(b));
    }
}

} // namespace

double compose_alpha(double a, double b) {
    if (a >= 1.0 && b >= 1.0) return 1.0;
    return (a + b - 2.0 * a * b) / (1.0 - a * b);
}

OpPtr translation(Vec a) {
    require_finite(a, "translation vector");
    int d = static_cast<int>(a.size());
    return OpMaker::make(nodes::Translation{std::move(a)}, d, 0.5, 1.0);
}

OpPtr affine_scale(double beta, Vec a) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw Error(Errc::bad_parameter, "affine_scale beta must lie in [0, 1]");
    }
    require_finite(a, "affine_scale vector");
    int d = static_cast<int>(a.size());
    return OpMaker::make(nodes::AffineScale{beta, std::move(a)}, d, 0.5, beta);
}

OpPtr proj_hyperplane(Vec normal, double offset) {
    require_finite(normal, "hyperplane normal");
    if (!std::isfinite(offset)) throw Error(Errc::bad_parameter, "hyperplane offset not finite");
    double nsq = norm_sq(normal);
    if (nsq <= 0.0) throw Error(Errc::bad_parameter, "hyperplane normal must be nonzero");
    int d = static_cast<int>(normal.size());
    return OpMaker::make(nodes::ProjHyperplane{std::move(normal), offset, 1.0 / nsq}, d, 0.5, 1.0);
}

OpPtr proj_halfspace(Vec normal, double offset) {
    require_finite(normal, "halfspace normal");
    if (!std::isfinite(offset)) throw Error(Errc::bad_parameter, "halfspace offset not finite");
    double nsq = norm_sq(normal);
    if (nsq <= 0.0) throw Error(Errc::bad_parameter, "halfspace normal must be nonzero");
    int d = static_cast<int>(normal.size());
    return OpMaker::make(nodes::ProjHalfspace{std::move(normal), offset, 1.0 / nsq}, d, 0.5, 1.0);
}

OpPtr proj_box(Vec lo, Vec hi) {
    require_finite(lo, "box lower corner");
    require_finite(hi, "box upper corner");
    require_same_dim(static_cast<int>(lo.size()), static_cast<int>(hi.size()), "box corners");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (lo[i] > hi[i]) throw Error(Errc::bad_parameter, "box has lo > hi");
    }
    int d = static_cast<int>(lo.size());
    return OpMaker::make(nodes::ProjBox{std::move(lo), std::move(hi)}, d, 0.5, 1.0);
}

OpPtr proj_ball(Vec center, double radius) {
    require_finite(center, "ball center");
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw Error(Errc::bad_parameter, "ball radius must be positive");
    }
    int d = static_cast<int>(center.size());
    return OpMaker::make(nodes::ProjBall{std::move(center), radius}, d, 0.5, 1.0);
}

OpPtr proj_hyperbola_epi() { return OpMaker::make(nodes::ProjHyperbolaEpi{}, 2, 0.5, 1.0); }

OpPtr resolvent(MonotoneSpecPtr spec) {
    if (!spec) throw Error(Errc::bad_parameter, "resolvent spec is null");
    int d = spec->dim();
    return OpMaker::make(nodes::Resolvent{std::move(spec)}, d, 0.5, 1.0);
}

OpPtr block_diag(std::vector<OpPtr> children) {
    if (children.empty()) throw Error(Errc::bad_parameter, "block_diag needs children");
    int total = 0;
    double alpha = 0.0, lip = 0.0;
    for (const auto& c : children) {
        if (!c) throw Error(Errc::bad_parameter, "block_diag child is null");
        total += c->dim();
        alpha = std::max(alpha, c->averaged_alpha());
        lip = std::max(lip, c->lipschitz_bound());
    }
    return OpMaker::make(nodes::BlockDiag{std::move(children)}, total, alpha, lip);
}

OpPtr compose(std::vector<OpPtr> children) {
    if (children.size() < 2) throw Error(Errc::bad_parameter, "compose needs at least 2 children");
    int d = children.front() ? children.front()->dim() : 0;
    double alpha = 0.0, lip = 1.0;
    bool first = true;
    for (const auto& c : children) {
        if (!c) throw Error(Errc::bad_parameter, "compose child is null");
        require_same_dim(c->dim(), d, "compose children");
        alpha = first ? c->averaged_alpha() : compose_alpha(alpha, c->averaged_alpha());
        lip = first ? c->lipschitz_bound() : lip * c->lipschitz_bound();
        first = false;
    }
    if (lip > 1.0) alpha = 1.0; // no averagedness claim for backdoor children
    return OpMaker::make(nodes::Compose{std::move(children)}, d, alpha, lip);
}

OpPtr convex_combination(std::vector<double> weights, std::vector<OpPtr> children) {
    if (children.size() < 2) {
        throw Error(Errc::bad_parameter, "convex_combination needs at least 2 children");
    }
    if (weights.size() != children.size()) {
        throw Error(Errc::bad_parameter, "weights and children differ in length");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0 && w <= 1.0)) {
            throw Error(Errc::weight_range, "weights must lie in (0, 1]");
        }
        sum += w;
    }
    // No silent renormalization; a bad sum is a caller bug.
    if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(Errc::weight_sum, "weights sum to " + std::to_string(sum));
    }
    int d = children.front() ? children.front()->dim() : 0;
    double alpha = 0.0, lip = 0.0;
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (!children[i]) throw Error(Errc::bad_parameter, "convex_combination child is null");
        require_same_dim(children[i]->dim(), d, "convex_combination children");
        alpha += weights[i] * children[i]->averaged_alpha();
        lip += weights[i] * children[i]->lipschitz_bound();
    }
    return OpMaker::make(nodes::ConvexCombo{std::move(weights), std::move(children)}, d, alpha,
                         lip);
}

OpPtr averaged(double alpha, OpPtr inner) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(Errc::bad_parameter, "averaged alpha must lie in (0, 1)");
    }
    if (!inner) throw Error(Errc::bad_parameter, "averaged inner operator is null");
    int d = inner->dim();
    double inner_alpha = inner->averaged_alpha();
    double inner_lip = inner->lipschitz_bound();
    double a = inner_lip <= 1.0 + 1e-12 ? alpha * inner_alpha : 1.0;
    double lip = (1.0 - alpha) + alpha * inner_lip;
    return OpMaker::make(nodes::Averaged{alpha, std::move(inner)}, d, a, lip);
}

namespace {

struct ApplyVisitor {
    const Vec& x;

    Vec operator()(const nodes::Translation& n) const { return sub(x, n.a); }

    Vec operator()(const nodes::AffineScale& n) const {
        Vec r(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = n.beta * x[i] - n.a[i];
        return r;
    }

    Vec operator()(const nodes::ProjHyperplane& n) const {
        double t = (dot(n.normal, x) - n.offset) * n.inv_norm_sq;
        Vec r = x;
        axpy(-t, n.normal, r);
        return r;
    }

    Vec operator()(const nodes::ProjHalfspace& n) const {
        double g = dot(n.normal, x) - n.offset;
        if (g <= 0.0) return x;
        Vec r = x;
        axpy(-g * n.inv_norm_sq, n.normal, r);
        return r;
    }

    Vec operator()(const nodes::ProjBox& n) const {
        Vec r(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::clamp(x[i], n.lo[i], n.hi[i]);
        return r;
    }

    Vec operator()(const nodes::ProjBall& n) const {
        Vec diff = sub(x, n.center);
        double dn = norm(diff);
        if (dn <= n.radius) return x;
        Vec r = n.center;
        axpy(n.radius / dn, diff, r);
        return r;
    }

    Vec operator()(const nodes::ProjHyperbolaEpi&) const { return project_hyperbola_epigraph(x); }

    Vec operator()(const nodes::Resolvent& n) const { return resolve(*n.spec, x); }

    Vec operator()(const nodes::BlockDiag& n) const {
        Vec r;
        r.reserve(x.size());
        std::size_t off = 0;
        for (const auto& c : n.children) {
            Vec slice(x.begin() + off, x.begin() + off + c->dim());
            Vec out = evaluate(*c, slice);
            r.insert(r.end(), out.begin(), out.end());
            off += static_cast<std::size_t>(c->dim());
        }
        return r;
    }

    Vec operator()(const nodes::Compose& n) const {
        Vec cur = x;
        for (const auto& c : n.children) cur = evaluate(*c, cur);
        return cur;
    }

    Vec operator()(const nodes::ConvexCombo& n) const {
        Vec r = zeros(static_cast<int>(x.size()));
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            axpy(n.weights[i], evaluate(*n.children[i], x), r);
        }
        return r;
    }

    Vec operator()(const nodes::Averaged& n) const {
        Vec inner = evaluate(*n.inner, x);
        Vec r(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            r[i] = (1.0 - n.alpha) * x[i] + n.alpha * inner[i];
        }
        return r;
    }
};

} // namespace

Vec evaluate(const Op& op, const Vec& x) {
    if (static_cast<int>(x.size()) != op.dim()) {
        throw Error(Errc::dimension_mismatch, "operator dim " + std::to_string(op.dim()) +
                                                  ", point dim " + std::to_string(x.size()));
    }
    return std::visit(ApplyVisitor{x}, op.node());
}

namespace testing {

OpPtr unchecked_affine_scale(double beta, Vec a) {
    int d = static_cast<int>(a.size());
    // Deliberately records no valid averagedness/Lipschitz certificate.
    return OpMaker::make(nodes::AffineScale{beta, std::move(a)}, d,
                         beta <= 1.0 ? 0.5 : 1.0, beta);
}

} // namespace testing

} // namespace mdv
