#pragma once

#include "mdv/op.hpp"

namespace mdv::testing {

// Backdoor for checker tests: builds x -> beta*x - a without the beta <= 1
// validation, so the negative paths of the samplers have something to catch.
// Not part of the public construction surface.
OpPtr unchecked_affine_scale(double beta, Vec a);

} // namespace mdv::testing
