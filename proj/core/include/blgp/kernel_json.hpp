#pragma once

#include "blgp/kernels.hpp"

#include <nlohmann/json.hpp>

namespace blgp {

/// KernelSpec <-> JSON object. Layout:
///   {"variant": "sinc"|"centred_sinc"|"gsk"|"sm"|"white"|"sum",
///    "sigma2": .., "xi0": .., "delta": .., "order": .., "gamma": .., "components": [..]}
/// For "gsk", "gamma" is the envelope object {"kind": "constant"|"triangular"|"table", ...};
/// for "sm", "gamma" is the spectral variance (a number).
nlohmann::json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const nlohmann::json& j);

nlohmann::json envelope_to_json(const SpectralEnvelope& env);
SpectralEnvelope envelope_from_json(const nlohmann::json& j);

}  // namespace blgp
