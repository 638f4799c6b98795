#pragma once

#include <string>

#include "json.hpp"
#include "mdv/estimator.hpp"
#include "mdv/monotone.hpp"
#include "mdv/op.hpp"
#include "mdv/product_space.hpp"

namespace mdv {

using Json = nlohmann::json;

// JSON operator schema. Every node is an object with a "type" in
//   translation | affine_scale | proj_hyperplane | proj_halfspace | proj_box |
//   proj_ball | proj_hyperbola_epi | resolvent | compose | convex_combo | averaged
// plus type-specific fields. Monotone specs mirror this with types
//   constant_map | psd_linear | subdiff_abs | normal_cone_box | shifted.
// Parse errors carry a distinct Errc and the JSON pointer of the offending node.
OpPtr parse_operator_json(const Json& j);
OpPtr parse_operator_string(const std::string& text);
OpPtr parse_operator_file(const std::string& path);

Json operator_to_json(const Op& op);
inline Json operator_to_json(const OpPtr& op) { return operator_to_json(*op); }

MonotoneSpecPtr parse_monotone_json(const Json& j, const std::string& where);
Json monotone_to_json(const MonotoneSpec& spec);

Json estimate_to_json(const DisplacementEstimate& e, bool include_history = true);
Json bound_check_to_json(const BoundCheck& c);
Json rotation_comparison_to_json(const RotationComparison& r);
Json attainment_to_json(const AttainmentDiagnosis& d);
Json certificate_to_json(const WitnessCertificate& c);

} // namespace mdv
