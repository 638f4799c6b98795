#include "mdv/product_space.hpp"

#include <cmath>
#include <cstdio>

namespace mdv {

namespace {

void validate_tuple(const ProductPoint& x) {
    if (x.parts.size() < 2) throw Error(Errc::bad_parameter, "product point needs m >= 2 parts");
    for (const auto& p : x.parts) {
        if (p.size() != x.parts.front().size()) {
            throw Error(Errc::dimension_mismatch, "product point parts differ in dim");
        }
    }
}

void validate_ops(const std::vector<OpPtr>& ops) {
    if (ops.size() < 2) throw Error(Errc::bad_parameter, "need m >= 2 operators");
    for (const auto& op : ops) {
        if (!op) throw Error(Errc::bad_parameter, "null operator");
        if (op->dim() != ops.front()->dim()) {
            throw Error(Errc::dimension_mismatch, "operators differ in dim");
        }
    }
}

} // namespace

ProductPoint zero_product_point(int m, int dim) {
    ProductPoint x;
    x.parts.assign(static_cast<std::size_t>(m), zeros(dim));
    return x;
}

double product_dist(const ProductPoint& a, const ProductPoint& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.parts.size(); ++i) s += norm_sq(sub(a.parts[i], b.parts[i]));
    return std::sqrt(s);
}

ProductPoint cyclic_shift(const ProductPoint& x) {
    validate_tuple(x);
    ProductPoint y;
    y.parts.reserve(x.parts.size());
    y.parts.push_back(x.parts.back());
    y.parts.insert(y.parts.end(), x.parts.begin(), x.parts.end() - 1);
    return y;
}

ProductPoint block_apply(const std::vector<OpPtr>& ops, const ProductPoint& x) {
    validate_ops(ops);
    validate_tuple(x);
    if (ops.size() != x.parts.size()) {
        throw Error(Errc::dimension_mismatch, "operator count differs from part count");
    }
    ProductPoint y;
    y.parts.reserve(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) y.parts.push_back(evaluate(ops[i], x.parts[i]));
    return y;
}

WitnessCertificate verify_telescoping(const std::vector<OpPtr>& ops, const ProductPoint& x) {
    validate_ops(ops);
    validate_tuple(x);
    if (ops.size() != x.parts.size()) {
        throw Error(Errc::dimension_mismatch, "operator count differs from part count");
    }
    const std::size_t m = ops.size();
    WitnessCertificate cert;
    cert.x0 = x.parts.back(); // x_0 := x_m

    Vec composite = cert.x0;
    for (const auto& op : ops) composite = evaluate(op, composite);
    cert.composite_residual = dist(cert.x0, composite);

    Vec prev = cert.x0;
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = dist(evaluate(ops[i], prev), x.parts[i]);
        cert.stage_residuals.push_back(r);
        sum += r;
        prev = x.parts[i];
    }
    cert.bound_rhs = sum;
    cert.pass = cert.composite_residual <= sum + 1e-10;
    return cert;
}

SynthesisResult synthesize_near_fixed_point(const std::vector<OpPtr>& ops,
                                            const std::vector<Vec>& v_list, double epsilon,
                                            long budget) {
    validate_ops(ops);
    if (v_list.size() != ops.size()) {
        throw Error(Errc::dimension_mismatch, "v_list length differs from operator count");
    }
    for (const auto& v : v_list) {
        if (static_cast<int>(v.size()) != ops.front()->dim()) {
            throw Error(Errc::dimension_mismatch, "v_list entry has wrong dim");
        }
    }
    if (!(epsilon > 0.0)) throw Error(Errc::bad_parameter, "epsilon must be > 0");
    if (budget < 1) throw Error(Errc::bad_parameter, "budget must be >= 1");

    const int m = static_cast<int>(ops.size());
    const int d = ops.front()->dim();
    const double target = epsilon / std::sqrt(static_cast<double>(m));

    // S: x -> v + T(R x) is nonexpansive (isometry, block map, translation),
    // so the damped iteration x <- (x + S x)/2 drives ||x - S x|| to its
    // infimum, which the construction makes 0.
    auto S = [&](const ProductPoint& x) {
        ProductPoint y = block_apply(ops, cyclic_shift(x));
        for (std::size_t i = 0; i < y.parts.size(); ++i) {
            y.parts[i] = add(v_list[i], y.parts[i]);
        }
        return y;
    };

    SynthesisResult out;
    ProductPoint x = zero_product_point(m, d);
    for (long n = 0; n < budget; ++n) {
        ProductPoint sx = S(x);
        for (const auto& p : sx.parts) {
            if (!all_finite(p)) {
                throw OverflowError("product-space iterate became non-finite", x.parts.front(), n);
            }
        }
        double resid = product_dist(x, sx);
        out.residual_history.push_back(resid);
        out.product_residual = resid;
        out.iterations = n;
        if (resid <= target) {
            out.reached_target = true;
            break;
        }
        for (std::size_t i = 0; i < x.parts.size(); ++i) {
            Vec mid(static_cast<std::size_t>(d));
            for (int k = 0; k < d; ++k) {
                mid[static_cast<std::size_t>(k)] =
                    0.5 * (x.parts[i][static_cast<std::size_t>(k)] +
                           sx.parts[i][static_cast<std::size_t>(k)]);
            }
            x.parts[i] = std::move(mid);
        }
    }

    out.tuple = x;
    out.certificate = verify_telescoping(ops, x);
    double sum_v = 0.0;
    for (const auto& v : v_list) sum_v += norm(v);
    out.certificate.bound_rhs = epsilon + sum_v;
    out.certificate.pass = out.certificate.composite_residual <= out.certificate.bound_rhs + 1e-9;
    return out;
}

std::string to_csv(const ProductPoint& x) {
    validate_tuple(x);
    std::string out = "part";
    for (std::size_t k = 0; k < x.parts.front().size(); ++k) {
        out += ",c" + std::to_string(k);
    }
    out += "\n";
    char buf[64];
    for (std::size_t i = 0; i < x.parts.size(); ++i) {
        out += std::to_string(i);
        for (double c : x.parts[i]) {
            std::snprintf(buf, sizeof buf, ",%.17g", c);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace mdv
