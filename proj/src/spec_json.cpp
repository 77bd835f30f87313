#include "modelspace/spec_json.hpp"

namespace modelspace
{

using nlohmann::json;

namespace
{

[[noreturn]] void schema_error(const std::string& path, const std::string& msg)
{
    throw Error(ErrorCode::ParseError, path + ": " + msg);
}

const json& require(const json& j, const char* key, const std::string& path)
{
    if (!j.is_object() || !j.contains(key))
    {
        schema_error(path, std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

double require_number(const json& j, const char* key, const std::string& path)
{
    const json& v = require(j, key, path);
    if (!v.is_number())
    {
        schema_error(path + "." + key, "expected a number");
    }
    return v.get<double>();
}

} // namespace

json complex_to_json(Complex z)
{
    return json{{"re", z.real()}, {"im", z.imag()}};
}

Complex complex_from_json(const json& j, const std::string& path)
{
    return {require_number(j, "re", path), require_number(j, "im", path)};
}

json spec_to_json(const InnerFunctionSpec& spec)
{
    switch (spec.kind())
    {
    case InnerFunctionSpec::Kind::blaschke:
    {
        json zeros = json::array();
        for (const Complex& a : spec.blaschke().zeros)
        {
            zeros.push_back(complex_to_json(a));
        }
        return json{{"type", "blaschke"},
                    {"zeros", zeros},
                    {"unimodular", complex_to_json(spec.blaschke().unimodular)}};
    }
    case InnerFunctionSpec::Kind::singular:
    {
        json atoms = json::array();
        for (const SingularAtom& atom : spec.singular().atoms)
        {
            atoms.push_back(json{{"angle", atom.angle}, {"mass", atom.mass}});
        }
        return json{{"type", "singular"}, {"atoms", atoms}};
    }
    case InnerFunctionSpec::Kind::product:
    {
        json factors = json::array();
        for (const auto& f : spec.product().factors)
        {
            factors.push_back(spec_to_json(f));
        }
        return json{{"type", "product"}, {"factors", factors}};
    }
    }
    return {};
}

InnerFunctionSpec spec_from_json(const json& j, const std::string& path)
{
    const json& type = require(j, "type", path);
    if (!type.is_string())
    {
        schema_error(path + ".type", "expected a string");
    }
    const std::string kind = type.get<std::string>();

    if (kind == "blaschke")
    {
        const json& zeros = require(j, "zeros", path);
        if (!zeros.is_array())
        {
            schema_error(path + ".zeros", "expected an array");
        }
        std::vector<Complex> values;
        for (std::size_t i = 0; i < zeros.size(); ++i)
        {
            values.push_back(complex_from_json(
                zeros[i], path + ".zeros[" + std::to_string(i) + "]"));
        }
        Complex c(1.0, 0.0);
        if (j.contains("unimodular"))
        {
            c = complex_from_json(j.at("unimodular"), path + ".unimodular");
        }
        return make_blaschke(std::move(values), c);
    }
    if (kind == "singular")
    {
        const json& atoms = require(j, "atoms", path);
        if (!atoms.is_array())
        {
            schema_error(path + ".atoms", "expected an array");
        }
        std::vector<SingularAtom> values;
        for (std::size_t i = 0; i < atoms.size(); ++i)
        {
            const std::string p = path + ".atoms[" + std::to_string(i) + "]";
            values.push_back({require_number(atoms[i], "angle", p),
                              require_number(atoms[i], "mass", p)});
        }
        return make_singular(std::move(values));
    }
    if (kind == "product")
    {
        const json& factors = require(j, "factors", path);
        if (!factors.is_array())
        {
            schema_error(path + ".factors", "expected an array");
        }
        std::vector<InnerFunctionSpec> values;
        for (std::size_t i = 0; i < factors.size(); ++i)
        {
            values.push_back(spec_from_json(
                factors[i], path + ".factors[" + std::to_string(i) + "]"));
        }
        return make_product(std::move(values));
    }
    schema_error(path + ".type", "unknown inner function type \"" + kind + "\"");
}

} // namespace modelspace
