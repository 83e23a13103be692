#pragma once

#include <json.hpp>

#include <string>

#include "freeprob/expr.hpp"
#include "freeprob/model.hpp"

namespace freeprob {

/// Schema violation carrying the JSON path of the offending field,
/// e.g. "summands[0].weight: zero denominator".
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& path, const std::string& message)
        : std::invalid_argument(path + ": " + message) {}
};

nlohmann::json rational_to_json(const Rational& q);
Rational rational_from_json(const nlohmann::json& j, const std::string& path);

/// Rationals serialize as "num/den"; irrational values as
/// {"a":"num/den","b":"num/den","d":int}.
nlohmann::json surd_to_json(const Surd& s);
Surd surd_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json ext_surd_to_json(const ExtSurd& s);  // "inf" when infinite
ExtSurd ext_surd_from_json(const nlohmann::json& j, const std::string& path);

/// {"summands":[{"kind":"matrix|lf|r|opaque", "n":int, "t":..., "weight":...,
///   "name":str, "fg_generators":[...]|"all", "compression":...}]}
nlohmann::json expression_to_json(const AlgebraExpression& e);
AlgebraExpression expression_from_json(const nlohmann::json& j, const std::string& path = "");
AlgebraExpression parse_expression(const std::string& text);

/// {"cardinality": 2|"inf", "components":[expr, ...]}
nlohmann::json free_product_to_json(const FreeProductExpression& fp);
FreeProductExpression free_product_from_json(const nlohmann::json& j, const std::string& path = "");
FreeProductExpression parse_free_product(const std::string& text);

/// {"blocks":[d_0,...], "weights":["num/den",...],
///  "elements":{"name": [block_0, block_1, ...]}} where each block is a
///  d x d array of [re, im] pairs.
ModelState model_from_json(const nlohmann::json& j, const std::string& path = "");

/// {"coefficients":["a0",...], "projection":"p"}
WordSpec word_from_json(const nlohmann::json& j, const std::string& path = "");

}  // namespace freeprob
