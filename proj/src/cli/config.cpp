#include "modelspace/cli/config.hpp"

#include "modelspace/io.hpp"
#include "modelspace/spec_json.hpp"

namespace modelspace::cli
{

using nlohmann::json;

namespace
{

std::string line_and_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            column = 1;
        }
        else
        {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

[[noreturn]] void invalid(const std::string& field, const std::string& msg)
{
    throw Error(ErrorCode::ValidationError, field + ": " + msg);
}

[[noreturn]] void wrong_type(const std::string& field, const std::string& expected)
{
    throw Error(ErrorCode::ParseError, field + ": expected " + expected);
}

bool is_auto(const json& v)
{
    return v.is_string() && v.get<std::string>() == "auto";
}

} // namespace

RunConfig parse_config_text(const std::string& text)
{
    json root;
    try
    {
        root = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw Error(ErrorCode::ParseError,
                    line_and_column(text, e.byte) + ": " + e.what());
    }
    if (!root.is_object())
    {
        wrong_type("<root>", "an object");
    }
    if (!root.contains("inner"))
    {
        throw Error(ErrorCode::ParseError, "inner: missing field");
    }

    std::optional<InnerFunctionSpec> spec;
    try
    {
        spec = spec_from_json(root.at("inner"), "inner");
    }
    catch (const Error& e)
    {
        if (e.code() == ErrorCode::ParseError)
        {
            throw;
        }
        invalid("inner", e.what());
    }
    RunConfig config(*spec);

    if (root.contains("truncation"))
    {
        const json& t = root.at("truncation");
        if (!t.is_object())
        {
            wrong_type("truncation", "an object");
        }
        if (t.contains("tail_tol"))
        {
            if (!t.at("tail_tol").is_number())
            {
                wrong_type("truncation.tail_tol", "a number");
            }
            config.tail_tol = t.at("tail_tol").get<double>();
            if (!(config.tail_tol > 0.0))
            {
                invalid("truncation.tail_tol", "must be > 0");
            }
        }
        if (t.contains("N") && !is_auto(t.at("N")))
        {
            if (!t.at("N").is_number_integer())
            {
                wrong_type("truncation.N", "an integer or \"auto\"");
            }
            const auto n = t.at("N").get<long long>();
            if (n < 2)
            {
                invalid("truncation.N", "must be >= 2");
            }
            config.n = static_cast<Eigen::Index>(n);
            config.auto_truncation = false;
        }
    }
    if (config.auto_truncation)
    {
        const auto choice = choose_truncation(config.inner, config.tail_tol);
        config.n = choice.n;
        config.truncation_warnings = choice.warnings;
    }
    else if (!config.inner.is_finite_blaschke())
    {
        config.truncation_warnings.push_back(
            "singular inner factor: K_Theta is infinite dimensional and the "
            "detected dimension depends on the truncation N");
    }

    if (root.contains("diagnostics"))
    {
        const json& d = root.at("diagnostics");
        if (!d.is_object())
        {
            wrong_type("diagnostics", "an object");
        }
        if (d.contains("n_max") && !is_auto(d.at("n_max")))
        {
            if (!d.at("n_max").is_number_integer())
            {
                wrong_type("diagnostics.n_max", "an integer or \"auto\"");
            }
            const auto n_max = d.at("n_max").get<long long>();
            if (n_max < 1)
            {
                invalid("diagnostics.n_max", "must be >= 1");
            }
            config.n_max = static_cast<int>(n_max);
        }
        if (d.contains("tol"))
        {
            if (!d.at("tol").is_number())
            {
                wrong_type("diagnostics.tol", "a number");
            }
            config.tol = d.at("tol").get<double>();
            if (!(config.tol > 0.0))
            {
                invalid("diagnostics.tol", "must be > 0");
            }
        }
    }

    if (root.contains("seed"))
    {
        const json& s = root.at("seed");
        if (!s.is_number_integer() || s.get<long long>() < 0)
        {
            invalid("seed", "must be a non-negative integer");
        }
        config.seed = s.get<std::uint64_t>();
    }
    return config;
}

RunConfig parse_config(const std::filesystem::path& path)
{
    return parse_config_text(read_text_file(path));
}

} // namespace modelspace::cli
