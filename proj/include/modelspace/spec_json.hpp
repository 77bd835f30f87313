///
/// \file spec_json.hpp
///
/// JSON form of InnerFunctionSpec:
///
///   {"type":"blaschke","zeros":[{"re":0.5,"im":0.0}],
///    "unimodular":{"re":1.0,"im":0.0}}
///   {"type":"singular","atoms":[{"angle":0.0,"mass":1.0}]}
///   {"type":"product","factors":[ ... ]}
///
#ifndef MODELSPACE_SPEC_JSON_HPP
#define MODELSPACE_SPEC_JSON_HPP

#include <json.hpp>

#include "modelspace/inner_function.hpp"

namespace modelspace
{

nlohmann::json spec_to_json(const InnerFunctionSpec& spec);

/// Throws Error(ParseError) for schema problems, naming the JSON path, and
/// lets construction errors (ZeroOnBoundary, ...) through unchanged.
InnerFunctionSpec spec_from_json(const nlohmann::json& j,
                                 const std::string& path = "inner");

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j, const std::string& path);

} // namespace modelspace

#endif // MODELSPACE_SPEC_JSON_HPP
