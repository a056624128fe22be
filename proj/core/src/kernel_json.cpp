#include "blgp/kernel_json.hpp"

#include "blgp/error.hpp"

namespace blgp {

using nlohmann::json;

namespace {

double number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw ValidationError(std::string("kernel json: missing numeric field '") + key + "'");
  }
  return it->get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

}  // namespace

json envelope_to_json(const SpectralEnvelope& env) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SpectralEnvelope::Constant>) {
          return {{"kind", "constant"}, {"value", s.value}};
        } else if constexpr (std::is_same_v<T, SpectralEnvelope::Triangular>) {
          return {{"kind", "triangular"},
                  {"centre", s.centre},
                  {"half_width", s.half_width},
                  {"peak", s.peak}};
        } else {
          return {{"kind", "table"}, {"freqs", s.freqs}, {"values", s.values}};
        }
      },
      env.shape());
}

SpectralEnvelope envelope_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("envelope json: expected an object with a 'kind' string");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "constant") return SpectralEnvelope::constant(number(j, "value"));
  if (kind == "triangular") {
    return SpectralEnvelope::triangular(number(j, "centre"), number(j, "half_width"),
                                        number_or(j, "peak", 1.0));
  }
  if (kind == "table") {
    if (!j.contains("freqs") || !j.contains("values")) {
      throw ValidationError("envelope json: table needs 'freqs' and 'values'");
    }
    try {
      return SpectralEnvelope::table(j["freqs"].get<std::vector<double>>(),
                                     j["values"].get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw ValidationError(std::string("envelope json: ") + e.what());
    }
  }
  throw ValidationError("envelope json: unknown kind '" + kind + "'");
}

json kernel_to_json(const KernelSpec& spec) {
  return std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, CentredSinc>) {
          return {{"variant", "centred_sinc"}, {"sigma2", k.sigma2}, {"xi0", 0.0}, {"delta", k.delta}};
        } else if constexpr (std::is_same_v<T, Sinc>) {
          return {{"variant", "sinc"},
                  {"sigma2", k.params.sigma2()},
                  {"xi0", k.params.xi0()},
                  {"delta", k.params.delta()}};
        } else if constexpr (std::is_same_v<T, GeneralisedSinc>) {
          return {{"variant", "gsk"},
                  {"sigma2", k.params.sigma2()},
                  {"xi0", k.params.xi0()},
                  {"delta", k.params.delta()},
                  {"order", k.order},
                  {"gamma", envelope_to_json(k.envelope)}};
        } else if constexpr (std::is_same_v<T, SpectralMixture>) {
          return {{"variant", "sm"}, {"sigma2", k.sigma2}, {"xi0", k.xi0}, {"gamma", k.gamma}};
        } else if constexpr (std::is_same_v<T, WhiteNoise>) {
          return {{"variant", "white"}, {"sigma2", k.sigma2}};
        } else {
          json comps = json::array();
          for (const auto& c : k.components) comps.push_back(kernel_to_json(c));
          return {{"variant", "sum"}, {"components", comps}};
        }
      },
      spec.variant());
}

KernelSpec kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("variant") || !j["variant"].is_string()) {
    throw ValidationError("kernel json: expected an object with a 'variant' string");
  }
  const auto variant = j["variant"].get<std::string>();
  if (variant == "centred_sinc") {
    return KernelSpec::centred_sinc(number(j, "sigma2"), number(j, "delta"));
  }
  if (variant == "sinc") {
    return KernelSpec::sinc(SincParams(number(j, "sigma2"), number(j, "xi0"), number(j, "delta")));
  }
  if (variant == "gsk") {
    if (!j.contains("gamma")) throw ValidationError("kernel json: gsk needs a 'gamma' envelope");
    const auto order = j.contains("order") && j["order"].is_number_integer() ? j["order"].get<int>() : -1;
    if (order < 1) throw ValidationError("kernel json: gsk needs an integer 'order' >= 1");
    return KernelSpec::generalised_sinc(
        SincParams(number(j, "sigma2"), number(j, "xi0"), number(j, "delta")),
        envelope_from_json(j["gamma"]), order);
  }
  if (variant == "sm") {
    return KernelSpec::spectral_mixture(number(j, "sigma2"), number_or(j, "xi0", 0.0),
                                        number(j, "gamma"));
  }
  if (variant == "white") return KernelSpec::white_noise(number(j, "sigma2"));
  if (variant == "sum") {
    if (!j.contains("components") || !j["components"].is_array()) {
      throw ValidationError("kernel json: sum needs a 'components' array");
    }
    std::vector<KernelSpec> comps;
    for (const auto& c : j["components"]) comps.push_back(kernel_from_json(c));
    return KernelSpec::sum(std::move(comps));
  }
  throw ValidationError("kernel json: unknown variant '" + variant + "'");
}

}  // namespace blgp
