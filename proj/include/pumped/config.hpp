#pragma once

#include <optional>
#include <string>

#include "pumped/model.hpp"
#include "pumped/twolevel.hpp"

namespace pumped {

/// Fully validated run description parsed from a flat key = value file.
struct RunConfig {
    ModelSpec model;
    std::optional<TwoLevelParams> two_level;  // set when given in shorthand form
    double t_end = 0.0;
    std::size_t samples = 0;
    double dt = 0.0;
    DensityMatrix rho_init;
    std::string out_dir = ".";
};

/// Parse the flat `key = value` format (# comments, matrix blocks on the
/// lines following an empty-valued key). Unknown keys and missing required
/// keys raise ConfigError with the offending names; physical-constraint
/// violations raise ValidationError as reported by validate().
RunConfig parse_config(const std::string& text,
                       const Tolerances& tols = default_tolerances());

/// parse_config over the contents of a file; ConfigError when unreadable.
RunConfig load_config(const std::string& path,
                      const Tolerances& tols = default_tolerances());

}  // namespace pumped
