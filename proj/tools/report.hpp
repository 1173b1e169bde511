#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "rmdp/finite_horizon.hpp"
#include "rmdp/policy_iteration.hpp"
#include "rmdp/robustness.hpp"

namespace rmdp::report {

using nlohmann::json;

json to_json(const Vector& v);
json to_json(const Matrix& m);  // array of rows; +-inf becomes null
json to_json(const McmModel& m, const Policy& g);
json to_json(const McmModel& m, const Kernel& k);
json to_json(const McmModel& m, const SupportPartition& p);
json to_json(const McmModel& m, const ClassDecomposition& d);
json to_json(const McmModel& m, const Evaluation& e);
json to_json(const McmModel& m, const EvaluationFailure& f);
json to_json(const Residuals& r);
json to_json(const McmModel& m, const IterationRecord& rec);
json final_json(const McmModel& m, const IterationReport& rep);
json diagnostics_json(const McmModel& m, const IterationReport& rep);
json to_json(const McmModel& m, const FiniteHorizonResult& r);
json to_json(const McmModel& m, const RmaxReport& r);
json to_json(const McmModel& m, const SweepResult& r);

std::string num(double v);  // 6 significant digits
std::string vec(const Vector& v);
std::string set_names(const McmModel& m, const std::vector<int>& s);

void print_kernel(std::ostream& os, const McmModel& m, const Kernel& k, const std::string& indent);
void print_partition(std::ostream& os, const McmModel& m, const SupportPartition& p);
void print_report(std::ostream& os, const McmModel& m, const IterationReport& rep);
void print_finite(std::ostream& os, const McmModel& m, const FiniteHorizonResult& r);
void print_rmax(std::ostream& os, const McmModel& m, const RmaxReport& r);
void print_sweep(std::ostream& os, const McmModel& m, const SweepResult& r);

}  // namespace rmdp::report
