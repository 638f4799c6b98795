#include "mdv/json_io.hpp"

#include <fstream>

namespace mdv {

namespace {

[[noreturn]] void fail(Errc code, const std::string& msg, const std::string& where) {
    throw Error(code, msg, where);
}

const Json& field(const Json& j, const char* name, const std::string& where) {
    auto it = j.find(name);
    if (it == j.end()) fail(Errc::missing_field, std::string("missing \"") + name + "\"", where);
    return *it;
}

double number_field(const Json& j, const char* name, const std::string& where) {
    const Json& v = field(j, name, where);
    if (!v.is_number()) fail(Errc::bad_field, std::string("\"") + name + "\" must be a number",
                             where + "/" + name);
    return v.get<double>();
}

Vec vector_field(const Json& j, const char* name, const std::string& where) {
    const Json& v = field(j, name, where);
    if (!v.is_array() || v.empty()) {
        fail(Errc::bad_field, std::string("\"") + name + "\" must be a nonempty array",
             where + "/" + name);
    }
    Vec out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
            fail(Errc::bad_field, "vector entries must be numbers",
                 where + "/" + name + "/" + std::to_string(i));
        }
        out.push_back(v[i].get<double>());
    }
    return out;
}

// Rethrows construction-time validation with the JSON pointer attached.
template <typename Fn>
auto at(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.where().empty()) throw Error(e.code(), e.detail(), where);
        throw;
    }
}

OpPtr parse_node(const Json& j, const std::string& where);

MonotoneSpecPtr parse_spec(const Json& j, const std::string& where) {
    if (!j.is_object()) fail(Errc::bad_field, "spec must be an object", where);
    const Json& tj = field(j, "type", where);
    if (!tj.is_string()) fail(Errc::bad_field, "\"type\" must be a string", where + "/type");
    const std::string type = tj.get<std::string>();

    if (type == "constant_map") {
        return at(where, [&] { return constant_map(vector_field(j, "c", where)); });
    }
    if (type == "psd_linear") {
        const Json& mj = field(j, "matrix", where);
        if (!mj.is_array() || mj.empty()) {
            fail(Errc::bad_field, "\"matrix\" must be an array of rows", where + "/matrix");
        }
        const std::size_t d = mj.size();
        std::vector<double> flat;
        flat.reserve(d * d);
        for (std::size_t r = 0; r < d; ++r) {
            if (!mj[r].is_array() || mj[r].size() != d) {
                fail(Errc::bad_field, "matrix must be square",
                     where + "/matrix/" + std::to_string(r));
            }
            for (std::size_t c = 0; c < d; ++c) {
                if (!mj[r][c].is_number()) {
                    fail(Errc::bad_field, "matrix entries must be numbers",
                         where + "/matrix/" + std::to_string(r) + "/" + std::to_string(c));
                }
                flat.push_back(mj[r][c].get<double>());
            }
        }
        return at(where, [&] { return psd_linear(std::move(flat), static_cast<int>(d)); });
    }
    if (type == "subdiff_abs") {
        double w = number_field(j, "weight", where);
        double d = number_field(j, "dim", where);
        if (d < 1 || d != static_cast<long>(d)) {
            fail(Errc::bad_field, "\"dim\" must be a positive integer", where + "/dim");
        }
        return at(where, [&] { return subdiff_abs(w, static_cast<int>(d)); });
    }
    if (type == "normal_cone_box") {
        Vec lo = vector_field(j, "lo", where);
        Vec hi = vector_field(j, "hi", where);
        return at(where, [&] { return normal_cone_box(std::move(lo), std::move(hi)); });
    }
    if (type == "shifted") {
        MonotoneSpecPtr inner = parse_spec(field(j, "inner", where), where + "/inner");
        Vec v = vector_field(j, "v", where);
        return at(where, [&] { return shift_operator(std::move(inner), std::move(v)); });
    }
    fail(Errc::unknown_type, "unknown monotone spec type \"" + type + "\"", where + "/type");
}

std::vector<OpPtr> children_field(const Json& j, const std::string& where) {
    const Json& cj = field(j, "children", where);
    if (!cj.is_array() || cj.empty()) {
        fail(Errc::bad_field, "\"children\" must be a nonempty array", where + "/children");
    }
    std::vector<OpPtr> out;
    out.reserve(cj.size());
    for (std::size_t i = 0; i < cj.size(); ++i) {
        out.push_back(parse_node(cj[i], where + "/children/" + std::to_string(i)));
    }
    return out;
}

OpPtr parse_node(const Json& j, const std::string& where) {
    if (!j.is_object()) fail(Errc::bad_field, "operator node must be an object", where);
    const Json& tj = field(j, "type", where);
    if (!tj.is_string()) fail(Errc::bad_field, "\"type\" must be a string", where + "/type");
    const std::string type = tj.get<std::string>();

    if (type == "translation") {
        return at(where, [&] { return translation(vector_field(j, "a", where)); });
    }
    if (type == "affine_scale") {
        double beta = number_field(j, "beta", where);
        Vec a = vector_field(j, "a", where);
        return at(where, [&] { return affine_scale(beta, std::move(a)); });
    }
    if (type == "proj_hyperplane") {
        Vec n = vector_field(j, "normal", where);
        double off = number_field(j, "offset", where);
        return at(where, [&] { return proj_hyperplane(std::move(n), off); });
    }
    if (type == "proj_halfspace") {
        Vec n = vector_field(j, "normal", where);
        double off = number_field(j, "offset", where);
        return at(where, [&] { return proj_halfspace(std::move(n), off); });
    }
    if (type == "proj_box") {
        Vec lo = vector_field(j, "lo", where);
        Vec hi = vector_field(j, "hi", where);
        return at(where, [&] { return proj_box(std::move(lo), std::move(hi)); });
    }
    if (type == "proj_ball") {
        Vec c = vector_field(j, "center", where);
        double r = number_field(j, "radius", where);
        return at(where, [&] { return proj_ball(std::move(c), r); });
    }
    if (type == "proj_hyperbola_epi") {
        return proj_hyperbola_epi();
    }
    if (type == "resolvent") {
        MonotoneSpecPtr spec = parse_spec(field(j, "spec", where), where + "/spec");
        return at(where, [&] { return resolvent(std::move(spec)); });
    }
    if (type == "compose") {
        auto ch = children_field(j, where);
        return at(where, [&] { return compose(std::move(ch)); });
    }
    if (type == "convex_combo") {
        const Json& wj = field(j, "weights", where);
        if (!wj.is_array()) fail(Errc::bad_field, "\"weights\" must be an array", where + "/weights");
        std::vector<double> weights;
        weights.reserve(wj.size());
        for (std::size_t i = 0; i < wj.size(); ++i) {
            if (!wj[i].is_number()) {
                fail(Errc::bad_field, "weights must be numbers",
                     where + "/weights/" + std::to_string(i));
            }
            weights.push_back(wj[i].get<double>());
        }
        auto ch = children_field(j, where);
        return at(where, [&] { return convex_combination(std::move(weights), std::move(ch)); });
    }
    if (type == "averaged") {
        double alpha = number_field(j, "alpha", where);
        OpPtr inner = parse_node(field(j, "inner", where), where + "/inner");
        return at(where, [&] { return averaged(alpha, std::move(inner)); });
    }
    fail(Errc::unknown_type, "unknown operator type \"" + type + "\"", where + "/type");
}

} // namespace

OpPtr parse_operator_json(const Json& j) { return parse_node(j, ""); }

OpPtr parse_operator_string(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::malformed_json, "input is not valid JSON");
    return parse_operator_json(j);
}

OpPtr parse_operator_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::malformed_json, path + " is not valid JSON");
    return parse_operator_json(j);
}

Json monotone_to_json(const MonotoneSpec& spec) {
    return std::visit(
        [&](const auto& n) -> Json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, monotone::ConstantMap>) {
                return Json{{"type", "constant_map"}, {"c", n.c}};
            } else if constexpr (std::is_same_v<T, monotone::PsdLinear>) {
                const int d = spec.dim();
                Json rows = Json::array();
                for (int r = 0; r < d; ++r) {
                    Json row = Json::array();
                    for (int c = 0; c < d; ++c) {
                        row.push_back(n.matrix[static_cast<std::size_t>(r) * d + c]);
                    }
                    rows.push_back(std::move(row));
                }
                return Json{{"type", "psd_linear"}, {"matrix", std::move(rows)}};
            } else if constexpr (std::is_same_v<T, monotone::SubdiffAbs>) {
                return Json{{"type", "subdiff_abs"}, {"weight", n.weight}, {"dim", n.dim}};
            } else if constexpr (std::is_same_v<T, monotone::NormalConeBox>) {
                return Json{{"type", "normal_cone_box"}, {"lo", n.lo}, {"hi", n.hi}};
            } else {
                static_assert(std::is_same_v<T, monotone::Shifted>);
                return Json{{"type", "shifted"}, {"inner", monotone_to_json(*n.inner)}, {"v", n.v}};
            }
        },
        spec.kind());
}

MonotoneSpecPtr parse_monotone_json(const Json& j, const std::string& where) {
    return parse_spec(j, where);
}

Json operator_to_json(const Op& op) {
    return std::visit(
        [&](const auto& n) -> Json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, nodes::Translation>) {
                return Json{{"type", "translation"}, {"a", n.a}};
            } else if constexpr (std::is_same_v<T, nodes::AffineScale>) {
                return Json{{"type", "affine_scale"}, {"beta", n.beta}, {"a", n.a}};
            } else if constexpr (std::is_same_v<T, nodes::ProjHyperplane>) {
                return Json{{"type", "proj_hyperplane"}, {"normal", n.normal}, {"offset", n.offset}};
            } else if constexpr (std::is_same_v<T, nodes::ProjHalfspace>) {
                return Json{{"type", "proj_halfspace"}, {"normal", n.normal}, {"offset", n.offset}};
            } else if constexpr (std::is_same_v<T, nodes::ProjBox>) {
                return Json{{"type", "proj_box"}, {"lo", n.lo}, {"hi", n.hi}};
            } else if constexpr (std::is_same_v<T, nodes::ProjBall>) {
                return Json{{"type", "proj_ball"}, {"center", n.center}, {"radius", n.radius}};
            } else if constexpr (std::is_same_v<T, nodes::ProjHyperbolaEpi>) {
                return Json{{"type", "proj_hyperbola_epi"}};
            } else if constexpr (std::is_same_v<T, nodes::Resolvent>) {
                return Json{{"type", "resolvent"}, {"spec", monotone_to_json(*n.spec)}};
            } else if constexpr (std::is_same_v<T, nodes::BlockDiag>) {
                // Internal combinator; emitted for reports, not accepted by the parser.
                Json ch = Json::array();
                for (const auto& c : n.children) ch.push_back(operator_to_json(*c));
                return Json{{"type", "block_diag"}, {"children", std::move(ch)}};
            } else if constexpr (std::is_same_v<T, nodes::Compose>) {
                Json ch = Json::array();
                for (const auto& c : n.children) ch.push_back(operator_to_json(*c));
                return Json{{"type", "compose"}, {"children", std::move(ch)}};
            } else if constexpr (std::is_same_v<T, nodes::ConvexCombo>) {
                Json ch = Json::array();
                for (const auto& c : n.children) ch.push_back(operator_to_json(*c));
                return Json{{"type", "convex_combo"},
                            {"weights", n.weights},
                            {"children", std::move(ch)}};
            } else {
                static_assert(std::is_same_v<T, nodes::Averaged>);
                return Json{{"type", "averaged"},
                            {"alpha", n.alpha},
                            {"inner", operator_to_json(*n.inner)}};
            }
        },
        op.node());
}

Json estimate_to_json(const DisplacementEstimate& e, bool include_history) {
    Json j{{"v_hat", e.v_hat},
           {"norm_v_hat", norm(e.v_hat)},
           {"upper_bound", e.upper_bound},
           {"iterations", e.iterations},
           {"converged", e.converged},
           {"final_iterate", e.final_iterate}};
    if (include_history) j["residual_history"] = e.residual_history;
    return j;
}

Json bound_check_to_json(const BoundCheck& c) {
    return Json{{"lhs", c.lhs},
                {"rhs", c.rhs},
                {"slack", c.slack},
                {"tolerance", c.tolerance},
                {"pass", c.pass},
                {"all_converged", c.all_converged}};
}

Json rotation_comparison_to_json(const RotationComparison& r) {
    Json est = Json::array();
    for (const auto& v : r.estimates) est.push_back(v);
    return Json{{"estimates", std::move(est)},
                {"converged", r.converged},
                {"max_pairwise_gap", r.max_pairwise_gap},
                {"all_converged", r.all_converged}};
}

Json attainment_to_json(const AttainmentDiagnosis& d) {
    return Json{{"iterates_bounded", d.iterates_bounded},
                {"orbit_radius", d.orbit_radius},
                {"fixed_point_residual", d.fixed_point_residual},
                {"final_iterate", d.final_iterate},
                {"iterations", d.iterations}};
}

Json certificate_to_json(const WitnessCertificate& c) {
    return Json{{"x0", c.x0},
                {"composite_residual", c.composite_residual},
                {"stage_residuals", c.stage_residuals},
                {"bound_rhs", c.bound_rhs},
                {"pass", c.pass}};
}

} // namespace mdv
