#include "modelspace/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "modelspace/hardy.hpp"
#include "modelspace/io.hpp"
#include "modelspace/spec_json.hpp"

namespace modelspace::cli
{

using nlohmann::json;

namespace
{

constexpr std::array<Complex, 5> kLambdaSample = {
    Complex(0.0, 0.0), Complex(0.3, 0.0), Complex(-0.3, 0.0),
    Complex(0.0, 0.5), Complex(0.7, 0.0)};

constexpr int kRandomVectors = 20;
constexpr int kRandomOperators = 10;
constexpr int kProbesPerOperator = 10;

json optional_number(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& log)
{
    for (const auto& w : warnings)
    {
        log << "WARN " << w << "\n";
    }
}

} // namespace

int exit_code(ErrorCode code)
{
    return code == ErrorCode::TruncationInsufficient ? kExitTruncation : kExitInput;
}

ComplexMatrix random_operator(Eigen::Index d, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0 * d));
    ComplexMatrix m(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
    {
        for (Eigen::Index j = 0; j < d; ++j)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            m(j, k) = Complex(re, im);
        }
    }
    return m;
}

Eigen::VectorXcd random_probe(Eigen::Index d, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd v(d);
    for (Eigen::Index i = 0; i < d; ++i)
    {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return v / v.norm();
}

OperatorSource OperatorSource::parse(const std::string& text)
{
    OperatorSource source;
    if (text == "random")
    {
        source.kind = Kind::random;
    }
    else if (text == "identity")
    {
        source.kind = Kind::identity;
    }
    else
    {
        source.kind = Kind::file;
        source.path = text;
    }
    return source;
}

std::string OperatorSource::describe() const
{
    switch (kind)
    {
    case Kind::random: return "random";
    case Kind::identity: return "identity";
    case Kind::file: return path.string();
    }
    return "";
}

OperatorOnK load_operator(const OperatorSource& source, const BasisPtr& basis,
                          std::mt19937_64& rng)
{
    const Eigen::Index d = basis->d;
    switch (source.kind)
    {
    case OperatorSource::Kind::random:
        return {basis, random_operator(d, rng)};
    case OperatorSource::Kind::identity:
        return {basis, ComplexMatrix::Identity(d, d)};
    case OperatorSource::Kind::file:
    {
        ComplexMatrix m = read_matrix_csv_file(source.path);
        if (m.rows() != d || m.cols() != d)
        {
            throw Error(ErrorCode::DimensionMismatch,
                        "operator " + source.path.string() + " is " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            ", model space has d = " + std::to_string(d));
        }
        return {basis, std::move(m)};
    }
    }
    throw Error(ErrorCode::ValidationError, "unknown operator source");
}

BasisPtr build_basis(const RunConfig& config)
{
    TruncationChoice choice;
    choice.n = config.n;
    choice.warnings = config.truncation_warnings;
    return extract_basis(config.inner, choice);
}

bool IdentitySuite::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckLine& c) { return c.pass(); });
}

double multiset_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b)
{
    if (a.size() != b.size())
    {
        return std::numeric_limits<double>::infinity();
    }
    std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
    {
        Eigen::Index best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < b.size(); ++j)
        {
            const double dist = std::abs(a(i) - b(j));
            if (!used[static_cast<std::size_t>(j)] && dist < best_dist)
            {
                best = j;
                best_dist = dist;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        worst = std::max(worst, best_dist);
    }
    return worst;
}

IdentitySuite run_identity_suite(const BasisPtr& basis, int n_max,
                                 std::uint64_t seed)
{
    IdentitySuite suite;
    auto add = [&suite](std::string name, double value, double bound,
                        bool lower = false) {
        suite.checks.push_back({std::move(name), value, bound, lower});
    };

    const ModelSpaceBasis& b = *basis;
    const Eigen::Index d = b.d;
    const Eigen::Index n = b.n;
    const ComplexMatrix s = compressed_shift(basis).matrix;
    std::mt19937_64 rng(seed);

    add("orthonormality",
        operator_norm(b.basis.adjoint() * b.basis - ComplexMatrix::Identity(d, d)),
        1e-10);
    add("eig_gap", b.eig_gap, kMaxEigGap);
    add("contraction", std::max(0.0, operator_norm(s) - 1.0), 1e-10);

    std::vector<Eigen::VectorXcd> samples;
    for (int i = 0; i < kRandomVectors; ++i)
    {
        samples.push_back(random_probe(d, rng));
    }

    const KernelVector k0 = kernel_vector(basis, Complex(0.0, 0.0));
    double reproducing = 0.0;
    double shift_conj_kernel = 0.0;
    double shift_kernel = 0.0;
    double conj_kernel = 0.0;
    for (const Complex lambda : kLambdaSample)
    {
        const KernelVector k = kernel_vector(basis, lambda);
        const KernelVector kt = conjugate_kernel_vector(basis, lambda);
        for (const auto& x : samples)
        {
            const CoeffVec f = from_coordinates(b, x);
            const Complex inner = k.coeffs.dot(f);
            reproducing = std::max(reproducing,
                                   std::abs(inner - evaluate_series(f, lambda)));
        }
        const Complex theta_lambda = evaluate(b.spec, lambda);
        shift_conj_kernel = std::max(
            shift_conj_kernel,
            (s * kt.coords - (lambda * kt.coords - theta_lambda * k0.coords)).norm());
        if (lambda != Complex(0.0, 0.0))
        {
            shift_kernel = std::max(
                shift_kernel,
                (s * k.coords - (k.coords - k0.coords) / std::conj(lambda)).norm());
        }
        conj_kernel = std::max(conj_kernel,
                               (conjugation_apply(basis, k.coeffs) - kt.coeffs).norm());
    }
    add("reproducing_kernel", reproducing, 1e-8);
    add("shift_conjugate_kernel", shift_conj_kernel, 1e-8);
    add("shift_kernel", shift_kernel, 1e-8);

    const DefectReport defect = defect_report(basis, d);
    add("defect_identity", defect.r1, 1e-8);
    double q_residual = 0.0;
    double rank_excess = 0.0;
    for (std::size_t i = 0; i < defect.residuals.size(); ++i)
    {
        q_residual = std::max(q_residual, defect.residuals[i]);
        rank_excess = std::max(
            rank_excess, static_cast<double>(defect.ranks[i]) - static_cast<double>(i + 1));
    }
    add("defect_expansion", q_residual, 1e-8);
    add("defect_rank_excess", rank_excess, 0.0);

    double isometric = 0.0;
    double involutive = 0.0;
    for (const auto& x : samples)
    {
        const CoeffVec f = from_coordinates(b, x);
        const CoeffVec cf = conjugation_apply(basis, f);
        isometric = std::max(isometric, std::abs(cf.norm() - f.norm()));
        involutive = std::max(involutive, (conjugation_apply(basis, cf) - f).norm());
    }
    add("conjugation_isometric", isometric, 1e-9);
    add("conjugation_involutive", involutive, 1e-9);
    add("conjugation_kernel", conj_kernel, 1e-8);

    const ComplexMatrix backward = shift_matrix(n).adjoint() * b.basis;
    const ComplexMatrix leak = backward - b.basis * (b.basis.adjoint() * backward);
    add("backward_shift_invariance", operator_norm(leak.topRows(n - 1)), 1e-8);

    if (b.spec.is_finite_blaschke())
    {
        const auto& zeros = b.spec.zeros();
        Eigen::VectorXcd expected(static_cast<Eigen::Index>(zeros.size()));
        for (std::size_t i = 0; i < zeros.size(); ++i)
        {
            expected(static_cast<Eigen::Index>(i)) = zeros[i];
        }
        const Eigen::VectorXcd eig = Eigen::ComplexEigenSolver<ComplexMatrix>(s).eigenvalues();
        add("eigenvalues_match_zeros", multiset_distance(eig, expected), 1e-6);
    }

    if (d <= kMaxFixedPointDim)
    {
        add("fixed_point_gap", fixed_point_gap(basis).sigma_min, kFixedPointTol, true);
    }

    double probe_excess = 0.0;
    double sandwich_excess = 0.0;
    std::vector<double> shift_power_sq;
    {
        ComplexMatrix power = ComplexMatrix::Identity(d, d);
        for (int k = 0; k <= n_max; ++k)
        {
            const double norm = operator_norm(power);
            shift_power_sq.push_back(norm * norm);
            power = s * power;
        }
    }
    for (int i = 0; i < kRandomOperators; ++i)
    {
        const OperatorOnK a{basis, random_operator(d, rng)};
        std::vector<Eigen::VectorXcd> probes;
        for (int p = 0; p < kProbesPerOperator; ++p)
        {
            probes.push_back(random_probe(d, rng));
        }
        const StrongProbeReport report = strong_probe(a, probes, n_max);
        for (const auto& probe : report.probes)
        {
            probe_excess = std::max(probe_excess, probe.worst_excess);
        }
        const DecayCurve curve = decay_curve(a, n_max);
        const double a_norm = operator_norm(a.matrix);
        for (const auto& e : curve.entries)
        {
            sandwich_excess = std::max(
                sandwich_excess,
                e.value - a_norm * shift_power_sq[static_cast<std::size_t>(e.n)]);
        }
    }
    add("strong_probe_bound", std::max(0.0, probe_excess), kProbeSlack);
    add("sandwich_bound", std::max(0.0, sandwich_excess), 1e-10);
    return suite;
}

std::string format_check(const CheckLine& line)
{
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer), "%s %-26s %s=%.3e %s %.0e",
                  line.pass() ? "PASS" : "FAIL", line.name.c_str(),
                  line.lower_bound ? "value" : "residual", line.value,
                  line.lower_bound ? ">" : "<=", line.bound);
    return buffer;
}

int cmd_build(const RunConfig& config, const std::filesystem::path& out,
              std::ostream& log)
{
    const BasisPtr basis = build_basis(config);
    print_warnings(basis->warnings, log);
    write_file_atomic(out, serialize_basis(*basis));
    log << "N=" << basis->n << " d=" << basis->d << " eig_gap="
        << format_double(basis->eig_gap) << " -> " << out.string() << "\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& log)
{
    print_warnings(config.truncation_warnings, log);
    BasisPtr basis;
    try
    {
        basis = build_basis(config);
    }
    catch (const Error& e)
    {
        log << "FAIL basis " << e.what() << "\n";
        throw;
    }
    for (const auto& w : basis->warnings)
    {
        if (std::find(config.truncation_warnings.begin(),
                      config.truncation_warnings.end(),
                      w) == config.truncation_warnings.end())
        {
            log << "WARN " << w << "\n";
        }
    }
    log << "N=" << basis->n << " d=" << basis->d << "\n";
    const IdentitySuite suite =
        run_identity_suite(basis, config.resolve_n_max(basis->d), config.seed);
    for (const auto& check : suite.checks)
    {
        log << format_check(check) << "\n";
    }
    return suite.all_pass() ? kExitOk : kExitCheckFailed;
}

std::filesystem::path decay_sidecar_path(const std::filesystem::path& out)
{
    std::filesystem::path sidecar = out;
    if (sidecar.extension() == ".json")
    {
        sidecar += ".score.json";
    }
    else
    {
        sidecar.replace_extension(".json");
    }
    return sidecar;
}

int cmd_decay(const RunConfig& config, const OperatorSource& source,
              const std::filesystem::path& out, std::ostream& log)
{
    const BasisPtr basis = build_basis(config);
    print_warnings(basis->warnings, log);
    std::mt19937_64 rng(config.seed);
    const OperatorOnK a = load_operator(source, basis, rng);
    const int n_max = config.resolve_n_max(basis->d);
    const CompactnessScore score = compactness_score(a, n_max, config.tol);

    std::ostringstream csv;
    csv << "n,value\n";
    for (const auto& e : score.curve.entries)
    {
        csv << e.n << "," << format_double(e.value) << "\n";
    }

    json report = {
        {"N", basis->n},
        {"d", basis->d},
        {"n_max", n_max},
        {"operator", source.describe()},
        {"seed", config.seed},
        {"tol", config.tol},
        {"operator_norm", operator_norm(a.matrix)},
        {"final_norm", score.final_norm},
        {"fitted_rate", optional_number(score.fitted_rate)},
        {"verdict", std::string(to_string(score.verdict))},
    };
    write_file_atomic(out, csv.str());
    write_file_atomic(decay_sidecar_path(out), dump(report));
    log << "final_norm=" << format_double(score.final_norm)
        << " verdict=" << to_string(score.verdict) << "\n";
    return kExitOk;
}

int cmd_fixed_point(const RunConfig& config,
                    const std::optional<std::filesystem::path>& out,
                    std::ostream& log)
{
    if (config.inner.is_finite_blaschke() &&
        static_cast<Eigen::Index>(config.inner.zeros().size()) > kMaxFixedPointDim)
    {
        throw Error(ErrorCode::TooLarge,
                    "Blaschke degree " + std::to_string(config.inner.zeros().size()) +
                        " exceeds the fixed-point limit d <= " +
                        std::to_string(kMaxFixedPointDim));
    }
    const BasisPtr basis = build_basis(config);
    print_warnings(basis->warnings, log);
    const FixedPointReport report = fixed_point_gap(basis);
    const std::string text =
        dump({{"sigma_min", report.sigma_min}, {"unique_zero", report.unique_zero}});
    if (out)
    {
        write_file_atomic(*out, text);
    }
    log << text;
    return report.unique_zero ? kExitOk : kExitCheckFailed;
}

int cmd_probe(const RunConfig& config, const OperatorSource& source,
              const std::filesystem::path& out, std::ostream& log)
{
    const BasisPtr basis = build_basis(config);
    print_warnings(basis->warnings, log);
    std::mt19937_64 rng(config.seed);
    const OperatorOnK a = load_operator(source, basis, rng);
    std::vector<Eigen::VectorXcd> probes;
    for (int p = 0; p < kProbesPerOperator; ++p)
    {
        probes.push_back(random_probe(basis->d, rng));
    }
    const int n_max = config.resolve_n_max(basis->d);
    const StrongProbeReport report = strong_probe(a, probes, n_max);

    std::ostringstream csv;
    csv << "probe,n,sandwich,orbit\n";
    json excess = json::array();
    for (std::size_t p = 0; p < report.probes.size(); ++p)
    {
        const ProbeResult& r = report.probes[p];
        for (std::size_t i = 0; i < r.sandwich.entries.size(); ++i)
        {
            csv << p << "," << r.sandwich.entries[i].n << ","
                << format_double(r.sandwich.entries[i].value) << ","
                << format_double(r.shift_orbit.entries[i].value) << "\n";
        }
        excess.push_back(r.worst_excess);
    }
    json summary = {
        {"N", basis->n},
        {"d", basis->d},
        {"n_max", n_max},
        {"operator", source.describe()},
        {"seed", config.seed},
        {"adjoint_norm", report.adjoint_norm},
        {"worst_excess", excess},
        {"all_bounds_hold", report.all_bounds_hold},
    };
    write_file_atomic(out, csv.str());
    write_file_atomic(decay_sidecar_path(out), dump(summary));
    log << "all_bounds_hold=" << (report.all_bounds_hold ? "true" : "false") << "\n";
    return report.all_bounds_hold ? kExitOk : kExitCheckFailed;
}

SymbolCoeffs read_symbol_csv(const std::filesystem::path& path)
{
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || line.rfind("m,re,im", 0) != 0)
    {
        throw Error(ErrorCode::ParseError,
                    path.string() + ": expected header \"m,re,im\"");
    }
    SymbolCoeffs symbol;
    int line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line == "\r")
        {
            continue;
        }
        int m = 0;
        double re = 0.0;
        double im = 0.0;
        char tail = 0;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf%c", &m, &re, &im, &tail) < 3)
        {
            throw Error(ErrorCode::ParseError,
                        path.string() + ": line " + std::to_string(line_no) +
                            ": expected m,re,im");
        }
        symbol[m] += Complex(re, im);
    }
    return symbol;
}

int cmd_h2(const H2Options& options, std::ostream& log)
{
    const SymbolCoeffs symbol = read_symbol_csv(options.symbol);
    ComplexMatrix t = toeplitz_matrix(symbol, options.n);
    if (options.perturbation)
    {
        const ComplexMatrix k = read_matrix_csv_file(*options.perturbation);
        if (k.rows() != options.n || k.cols() != options.n)
        {
            throw Error(ErrorCode::DimensionMismatch,
                        "perturbation is " + std::to_string(k.rows()) + "x" +
                            std::to_string(k.cols()) + ", expected N = " +
                            std::to_string(options.n));
        }
        t += k;
    }
    const FeintuchSplit split = feintuch_split_h2(t, options.n_star);

    json coeffs = json::array();
    for (const auto& [m, c] : split.symbol)
    {
        coeffs.push_back({{"m", m}, {"re", c.real()}, {"im", c.imag()}});
    }
    json deviations = json::array();
    for (const auto& [m, v] : split.deviations)
    {
        deviations.push_back({{"m", m}, {"value", v}});
    }
    json report = {
        {"N", options.n},
        {"n_star", options.n_star},
        {"symbol", coeffs},
        {"deviations", deviations},
        {"max_deviation", split.max_deviation},
        {"compact_norm", operator_norm(split.compact_part)},
    };

    std::filesystem::create_directories(options.out);
    write_file_atomic(options.out / "T1.csv", matrix_to_csv(split.toeplitz_part));
    write_file_atomic(options.out / "K.csv", matrix_to_csv(split.compact_part));
    write_file_atomic(options.out / "report.json", dump(report));
    log << "compact_norm=" << format_double(operator_norm(split.compact_part))
        << " max_deviation=" << format_double(split.max_deviation) << "\n";
    return kExitOk;
}

} // namespace modelspace::cli
