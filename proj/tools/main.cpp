#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "modelspace/cli/commands.hpp"

namespace cli = modelspace::cli;

namespace
{

struct Options
{
    std::string config;
    std::string out;
    std::optional<int> n_max;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::string op = "random";

    std::string symbol;
    std::string perturbation;
    long n = 16;
    int n_star = 2;
};

void add_config_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--config", o.config, "run configuration (JSON)")->required();
    cmd->add_option("--nmax", o.n_max, "iterations of the asymptotic sequence");
    cmd->add_option("--tol", o.tol, "decay verdict tolerance");
    cmd->add_option("--seed", o.seed, "seed for random operators and probes");
}

cli::RunConfig load(const Options& o)
{
    cli::RunConfig config = cli::parse_config(o.config);
    if (o.n_max)
    {
        if (*o.n_max < 1)
        {
            throw modelspace::Error(modelspace::ErrorCode::ValidationError,
                                    "--nmax must be >= 1");
        }
        config.n_max = *o.n_max;
    }
    if (o.tol)
    {
        if (!(*o.tol > 0.0))
        {
            throw modelspace::Error(modelspace::ErrorCode::ValidationError,
                                    "--tol must be > 0");
        }
        config.tol = *o.tol;
    }
    if (o.seed)
    {
        config.seed = *o.seed;
    }
    return config;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Model spaces K_Theta, compressed shifts and asymptotic Toeplitz diagnostics"};
    app.require_subcommand(1);
    Options o;

    auto* build = app.add_subcommand("build", "extract and save the model-space basis");
    add_config_flags(build, o);
    build->add_option("--out", o.out, "basis file")->required();

    auto* verify = app.add_subcommand("verify", "run the identity suite");
    add_config_flags(verify, o);

    auto* decay = app.add_subcommand("decay", "norm decay of S*^n A S^n");
    add_config_flags(decay, o);
    decay->add_option("--operator", o.op, "random | identity | CSV matrix path");
    decay->add_option("--out", o.out, "curve CSV (score JSON is written alongside)")
        ->required();

    auto* fixed = app.add_subcommand("fixed-point", "gap of A -> S* A S - A");
    add_config_flags(fixed, o);
    fixed->add_option("--out", o.out, "report JSON");

    auto* probe = app.add_subcommand("probe", "strong convergence on random probes");
    add_config_flags(probe, o);
    probe->add_option("--operator", o.op, "random | identity | CSV matrix path");
    probe->add_option("--out", o.out, "probe CSV (summary JSON is written alongside)")
        ->required();

    auto* h2 = app.add_subcommand("h2", "Toeplitz plus compact split on truncated H2");
    h2->add_option("--symbol", o.symbol, "symbol CSV (m,re,im)")->required();
    h2->add_option("--perturbation", o.perturbation, "matrix CSV added to T");
    h2->add_option("--size", o.n, "truncation N")->required();
    h2->add_option("--nstar", o.n_star, "shift count n*")->required();
    h2->add_option("--out", o.out, "output directory")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return cli::kExitInput;
    }

    try
    {
        if (*build)
        {
            return cli::cmd_build(load(o), o.out, std::cout);
        }
        if (*verify)
        {
            return cli::cmd_verify(load(o), std::cout);
        }
        if (*decay)
        {
            return cli::cmd_decay(load(o), cli::OperatorSource::parse(o.op), o.out,
                                  std::cout);
        }
        if (*fixed)
        {
            std::optional<std::filesystem::path> out;
            if (!o.out.empty())
            {
                out = o.out;
            }
            return cli::cmd_fixed_point(load(o), out, std::cout);
        }
        if (*probe)
        {
            return cli::cmd_probe(load(o), cli::OperatorSource::parse(o.op), o.out,
                                  std::cout);
        }
        if (*h2)
        {
            cli::H2Options h;
            h.symbol = o.symbol;
            if (!o.perturbation.empty())
            {
                h.perturbation = o.perturbation;
            }
            h.n = o.n;
            h.n_star = o.n_star;
            h.out = o.out;
            return cli::cmd_h2(h, std::cout);
        }
    }
    catch (const modelspace::Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code(e.code());
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitInput;
    }
    return cli::kExitInput;
}
