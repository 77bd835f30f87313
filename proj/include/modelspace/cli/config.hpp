///
/// \file config.hpp
///
/// Run configuration file:
///
///   {
///     "inner": { ...inner function JSON... },
///     "truncation": {"N": 128 | "auto", "tail_tol": 1e-24},
///     "diagnostics": {"n_max": 40 | "auto", "tol": 1e-6},
///     "seed": 0
///   }
///
/// Everything except "inner" is optional.
///
#ifndef MODELSPACE_CLI_CONFIG_HPP
#define MODELSPACE_CLI_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "modelspace/model_space.hpp"

namespace modelspace::cli
{

struct RunConfig
{
    explicit RunConfig(InnerFunctionSpec s) : inner(std::move(s)) {}

    InnerFunctionSpec inner;
    /// Resolved truncation order; auto_truncation records how it was chosen.
    Eigen::Index n = kMinTruncation;
    bool auto_truncation = true;
    double tail_tol = kDefaultTailTol;
    std::vector<std::string> truncation_warnings;
    /// Absent means 4 d once the basis is known.
    std::optional<int> n_max;
    double tol = 1e-6;
    std::uint64_t seed = 0;

    int resolve_n_max(Eigen::Index d) const
    {
        return n_max ? *n_max : static_cast<int>(4 * d);
    }
};

/// Throws Error(ParseError) with line and column for malformed JSON or a
/// wrong schema, and Error(ValidationError) naming the violated invariant.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

} // namespace modelspace::cli

#endif // MODELSPACE_CLI_CONFIG_HPP
