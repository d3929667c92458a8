#pragma once

#include <string>
#include <string_view>

#include "bigbang/bounce.hpp"
#include "bigbang/cosmo.hpp"
#include "bigbang/flow.hpp"
#include "bigbang/regularity.hpp"

namespace bigbang {

/// Strict parameter document: keys sigma, K, G, rho_m, rho_rad, rho_w (numbers)
/// and w (an exact rational as a string or an integer). Missing keys keep their
/// defaults; unknown keys and floating w are rejected.
CosmologyParams params_from_json(std::string_view text);
CosmologyParams load_params(const std::string& path);
std::string params_to_json(const CosmologyParams& params);

/// key=value override with the same key names and value rules as the file.
void apply_override(CosmologyParams& params, std::string_view assignment);

// Serializers. Key order is fixed and doubles print in shortest round-trip
// form, so equal inputs give byte-identical output.
std::string to_json(const RegularityClass& cls);
std::string to_json(const ReducedModel& model, double h);
std::string to_json(const DiagnosticsReport& report);
std::string to_json(const BounceResult& result, const std::string& pre_csv, const std::string& post_csv);

}  // namespace bigbang
