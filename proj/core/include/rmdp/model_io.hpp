#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmdp/model.hpp"

namespace rmdp {

struct ParsedModel {
    McmModel model;
    std::vector<ValidationError> errors;  // structural problems found while reading
    bool ok() const { return errors.empty(); }
};

// Accepts a JSON number, a decimal string, or an exact fraction "a/b".
// Throws std::invalid_argument otherwise.
double parse_number(const nlohmann::json& j);
double parse_number(const std::string& text);
inline double parse_number(const char* text) { return parse_number(std::string(text)); }

ParsedModel parse_model(const nlohmann::json& doc);
ParsedModel load_model(const std::string& path);

nlohmann::json model_to_json(const McmModel& model);

// "u1,u2,u2" -> control indices, checked for feasibility.
Policy parse_policy(const McmModel& model, const std::string& text);

// Comma or whitespace separated numbers; fractions allowed.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace rmdp
