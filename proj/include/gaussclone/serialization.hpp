#pragma once

#include "json.hpp"

#include "gaussclone/gaussian_state.hpp"

namespace gaussclone {

// JSON schema: {"n_modes": int, "mean": [..], "cov": [[..]]}.
nlohmann::json state_to_json(const GaussianState& state);

// Inverse of state_to_json; malformed documents raise ParseError, physically
// invalid moments propagate the GaussianState constructor errors.
GaussianState state_from_json(const nlohmann::json& doc);

}  // namespace gaussclone
