///
/// \file commands.hpp
///
/// Subcommands of the `modelspace` tool. Every command throws Error on
/// bad input; exit_code() maps error codes onto the process contract
///
///   0  success, all checks pass
///   1  input, parse, dimension or I/O error
///   2  truncation insufficient
///   3  computation ran but a check failed
///
#ifndef MODELSPACE_CLI_COMMANDS_HPP
#define MODELSPACE_CLI_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "modelspace/asymptotics.hpp"
#include "modelspace/cli/config.hpp"

namespace modelspace::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitTruncation = 2;
inline constexpr int kExitCheckFailed = 3;

int exit_code(ErrorCode code);

/// Random operator: entries re + i im with re, im ~ N(0, 1/(2d)) drawn in
/// that order, column by column, so each entry has standard deviation
/// 1/sqrt(d).
ComplexMatrix random_operator(Eigen::Index d, std::mt19937_64& rng);

/// Probe vector: re, im ~ N(0, 1) per entry, normalised to unit length.
Eigen::VectorXcd random_probe(Eigen::Index d, std::mt19937_64& rng);

struct OperatorSource
{
    enum class Kind
    {
        random,
        identity,
        file
    };
    Kind kind = Kind::random;
    std::filesystem::path path;

    /// "random", "identity" or a CSV matrix path.
    static OperatorSource parse(const std::string& text);
    std::string describe() const;
};

/// Throws DimensionMismatch if a CSV operator is not d x d.
OperatorOnK load_operator(const OperatorSource& source, const BasisPtr& basis,
                          std::mt19937_64& rng);

/// Basis at the configured truncation, with the truncation warnings merged.
BasisPtr build_basis(const RunConfig& config);

struct CheckLine
{
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    /// true: pass iff value > bound; false: pass iff value <= bound
    bool lower_bound = false;

    bool pass() const { return lower_bound ? value > bound : value <= bound; }
};

struct IdentitySuite
{
    std::vector<CheckLine> checks;
    bool all_pass() const;
};

/// Every model-space and asymptotics invariant that holds at finite
/// truncation, on a built basis. Random draws come from `seed`.
IdentitySuite run_identity_suite(const BasisPtr& basis, int n_max,
                                 std::uint64_t seed);

std::string format_check(const CheckLine& line);

/// Multiset distance: greedy nearest matching, max matched distance.
double multiset_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

int cmd_build(const RunConfig& config, const std::filesystem::path& out,
              std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);
/// Writes the curve CSV at `out` and the compactness JSON next to it
/// (decay_sidecar_path).
int cmd_decay(const RunConfig& config, const OperatorSource& source,
              const std::filesystem::path& out, std::ostream& log);
std::filesystem::path decay_sidecar_path(const std::filesystem::path& out);
int cmd_fixed_point(const RunConfig& config,
                    const std::optional<std::filesystem::path>& out,
                    std::ostream& log);
/// Writes one CSV row per (probe, n) and a JSON summary next to it.
int cmd_probe(const RunConfig& config, const OperatorSource& source,
              const std::filesystem::path& out, std::ostream& log);

struct H2Options
{
    std::filesystem::path symbol;
    std::optional<std::filesystem::path> perturbation;
    Eigen::Index n = 16;
    int n_star = 2;
    /// Output directory; receives T1.csv, K.csv and report.json.
    std::filesystem::path out;
};

/// Symbol CSV: header "m,re,im", one coefficient per row.
SymbolCoeffs read_symbol_csv(const std::filesystem::path& path);
int cmd_h2(const H2Options& options, std::ostream& log);

} // namespace modelspace::cli

#endif // MODELSPACE_CLI_COMMANDS_HPP
