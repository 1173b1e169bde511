#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "report.hpp"
#include "rmdp/chain.hpp"
#include "rmdp/model_io.hpp"
#include "rmdp/simulate.hpp"
#include "rmdp/worst_case.hpp"

namespace rmdp::cli {

using nlohmann::json;

namespace {

struct Settings {
    std::string format = "text";
    bool deterministic = false;
    std::optional<double> tol;
    std::string radius;

    std::string model_path;

    std::string algorithm = "unichain";
    std::string g0;
    std::string anchor;
    std::vector<std::string> pins;
    int max_iter = 0;

    int horizon = 1;
    long long sim_horizon = 1;
    std::string terminal;
    std::string values;
    std::string radii;
    double cap = kDefaultEnumerationCap;

    std::string policy;
    std::uint64_t seed = 0;
    std::string initial;
    std::string kernel = "worst-case";
};

class Failure : public std::runtime_error {
public:
    Failure(ExitCode c, const std::string& what) : std::runtime_error(what), code(c) {}
    ExitCode code;
};

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

McmModel load(const Settings& s) {
    auto parsed = load_model(s.model_path);
    std::vector<ValidationError> errs = parsed.errors;
    if (parsed.ok()) {
        if (!s.radius.empty()) {
            try {
                parsed.model.radius = parse_number(s.radius);
            } catch (const std::exception& e) {
                throw Failure(usage_error, std::string("--radius: ") + e.what());
            }
        }
        errs = validate(parsed.model);
    }
    if (!errs.empty()) {
        std::string msg = "model " + s.model_path + " is invalid:";
        for (const auto& e : errs) msg += "\n  " + e.location + ": " + e.message;
        throw Failure(validation_error, msg);
    }
    return parsed.model;
}

int state_arg(const McmModel& m, const std::string& name, const char* flag) {
    const int x = m.state_index(name);
    if (x < 0) throw Failure(validation_error, std::string(flag) + ": unknown state " + name);
    return x;
}

Policy policy_arg(const McmModel& m, const std::string& text, const char* flag) {
    if (text.empty()) return first_feasible_policy(m);
    try {
        return parse_policy(m, text);
    } catch (const std::invalid_argument& e) {
        throw Failure(validation_error, std::string(flag) + ": " + e.what());
    }
}

Vector vector_arg(const McmModel& m, const std::string& text, const char* flag) {
    std::vector<double> v;
    try {
        v = parse_number_list(text);
    } catch (const std::invalid_argument& e) {
        throw Failure(usage_error, std::string(flag) + ": " + e.what());
    }
    if (static_cast<int>(v.size()) != m.n_states())
        throw Failure(usage_error, std::string(flag) + " needs " + std::to_string(m.n_states()) +
                                       " values, got " + std::to_string(v.size()));
    return Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

PolicyIterationOptions pi_options(const McmModel& m, const Settings& s) {
    PolicyIterationOptions opt;
    opt.max_iter = s.max_iter;
    opt.tol = tolerance();
    if (!s.anchor.empty()) opt.anchor = state_arg(m, s.anchor, "--anchor");
    for (const auto& p : s.pins) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw Failure(usage_error, "--pin expects state=value, got " + p);
        const int x = state_arg(m, p.substr(0, eq), "--pin");
        try {
            opt.pins[x] = parse_number(p.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw Failure(usage_error, std::string("--pin: ") + e.what());
        }
    }
    return opt;
}

Algorithm algorithm_arg(const std::string& a) {
    return a == "general" ? Algorithm::general : Algorithm::unichain;
}

json skeleton(const std::string& command, const Settings& s, const McmModel* m) {
    json doc;
    doc["command"] = command;
    doc["model"] = m ? model_to_json(*m) : json::object();
    doc["model"]["path"] = s.model_path;
    json cfg = {{"format", s.format}, {"tolerance", tolerance()}};
    if (!s.deterministic) cfg["generated_at"] = timestamp();
    doc["config"] = cfg;
    doc["iterations"] = json::array();
    doc["final"] = nullptr;
    doc["diagnostics"] = json::object();
    return doc;
}

void text_header(std::ostream& out, const std::string& command, const Settings& s,
                 const McmModel& m) {
    if (!s.deterministic) out << "# rmdp " << command << " " << timestamp() << "\n";
    out << "model " << s.model_path << ": " << m.n_states() << " states, " << m.n_controls()
        << " controls, R = " << report::num(m.radius) << "\n";
}

int cmd_validate(const Settings& s, std::ostream& out) {
    const McmModel m = load(s);
    if (s.format == "json") {
        json doc = skeleton("validate", s, &m);
        doc["final"] = {{"valid", true}, {"errors", json::array()}};
        out << doc.dump(2) << "\n";
    } else {
        text_header(out, "validate", s, m);
        out << "valid\n";
    }
    return ok;
}

int cmd_solve(const Settings& s, std::ostream& out) {
    const McmModel m = load(s);
    const Policy g0 = policy_arg(m, s.g0, "--g0");
    const auto opt = pi_options(m, s);
    const Algorithm alg = algorithm_arg(s.algorithm);
    const IterationReport rep = alg == Algorithm::unichain ? policy_iteration_unichain(m, g0, opt)
                                                           : policy_iteration_general(m, g0, opt);
    if (s.format == "json") {
        json doc = skeleton("solve", s, &m);
        doc["config"]["algorithm"] = s.algorithm;
        doc["config"]["g0"] = report::to_json(m, g0);
        doc["config"]["max_iter"] = opt.max_iter > 0 ? opt.max_iter : default_max_iter(m);
        json pins = json::object();
        for (const auto& [x, v] : opt.pins) pins[m.states[x]] = v;
        doc["config"]["pins"] = pins;
        if (alg == Algorithm::unichain)
            doc["config"]["anchor"] = m.states[opt.anchor < 0 ? m.n_states() - 1 : opt.anchor];
        for (const auto& r : rep.iterations) doc["iterations"].push_back(report::to_json(m, r));
        doc["final"] = report::final_json(m, rep);
        doc["diagnostics"] = report::diagnostics_json(m, rep);
        out << doc.dump(2) << "\n";
    } else {
        text_header(out, "solve", s, m);
        out << "algorithm " << s.algorithm << ", g0 = " << format_policy(m, g0) << "\n\n";
        report::print_report(out, m, rep);
    }
    return rep.stop_reason == StopReason::converged ? ok : solver_failure;
}

int cmd_finite(const Settings& s, std::ostream& out) {
    const McmModel m = load(s);
    const Vector terminal =
        s.terminal.empty() ? Vector::Zero(m.n_states()) : vector_arg(m, s.terminal, "--terminal");
    if (s.horizon < 1) throw Failure(usage_error, "--horizon must be at least 1");
    const auto r = finite_horizon_solve(m, s.horizon, terminal);
    if (s.format == "json") {
        json doc = skeleton("finite", s, &m);
        doc["config"]["horizon"] = s.horizon;
        doc["final"] = report::to_json(m, r);
        out << doc.dump(2) << "\n";
    } else {
        text_header(out, "finite", s, m);
        report::print_finite(out, m, r);
    }
    return ok;
}

int cmd_worst_kernel(const Settings& s, std::ostream& out) {
    const McmModel m = load(s);
    const Vector values = vector_arg(m, s.values, "--values");
    const auto part = partition_support(values);
    const Kernel k = worst_case_kernel(m, part);
    if (s.format == "json") {
        json doc = skeleton("worst-kernel", s, &m);
        doc["config"]["values"] = report::to_json(values);
        doc["final"] = {{"partition", report::to_json(m, part)},
                        {"worst_case_kernel", report::to_json(m, k)}};
        out << doc.dump(2) << "\n";
    } else {
        text_header(out, "worst-kernel", s, m);
        out << "partition: ";
        report::print_partition(out, m, part);
        report::print_kernel(out, m, k, "");
    }
    return ok;
}

int cmd_rmax(const Settings& s, std::ostream& out) {
    const McmModel m = load(s);
    RmaxReport r;
    try {
        r = compute_rmax(m, s.cap);
    } catch (const std::length_error& e) {
        throw Failure(solver_failure, e.what());
    }
    if (s.format == "json") {
        json doc = skeleton("rmax", s, &m);
        doc["config"]["enumeration_cap"] = s.cap;
        doc["final"] = report::to_json(m, r);
        doc["diagnostics"]["r_max"] = r.r_max;
        out << doc.dump(2) << "\n";
    } else {
        text_header(out, "rmax", s, m);
        report::print_rmax(out, m, r);
    }
    return ok;
}

int cmd_sweep(const Settings& s, std::ostream& out) {
    const McmModel m = load(s);
    std::vector<double> radii;
    try {
        radii = parse_number_list(s.radii);
    } catch (const std::invalid_argument& e) {
        throw Failure(usage_error, std::string("--radii: ") + e.what());
    }
    for (double r : radii)
        if (!(r >= 0.0 && r <= 2.0))
            throw Failure(usage_error, "--radii: radius " + report::num(r) + " is outside [0, 2]");
    const Policy g0 = policy_arg(m, s.g0, "--g0");
    const auto res = sweep_radius(m, radii, algorithm_arg(s.algorithm), g0, pi_options(m, s));
    if (s.format == "json") {
        json doc = skeleton("sweep", s, &m);
        doc["config"]["algorithm"] = s.algorithm;
        doc["config"]["radii"] = radii;
        doc["final"] = report::to_json(m, res);
        out << doc.dump(2) << "\n";
    } else {
        text_header(out, "sweep", s, m);
        report::print_sweep(out, m, res);
    }
    return ok;
}

int cmd_simulate(const Settings& s, std::ostream& out) {
    const McmModel m = load(s);
    const Policy g = policy_arg(m, s.policy, "--policy");
    const int initial = s.initial.empty() ? 0 : state_arg(m, s.initial, "--initial");
    if (s.sim_horizon < 1) throw Failure(usage_error, "--horizon must be at least 1");
    const Kernel k = s.kernel == "nominal" ? m.nominal : robust_policy_evaluation(m, g).kernel;
    const double avg = simulate_average_cost(m, g, k, s.sim_horizon, s.seed, initial);
    const Vector exact = average_cost_of_policy(m, g, k);
    if (s.format == "json") {
        json doc = skeleton("simulate", s, &m);
        doc["config"]["policy"] = report::to_json(m, g);
        doc["config"]["horizon"] = s.sim_horizon;
        doc["config"]["seed"] = s.seed;
        doc["config"]["initial"] = m.states[initial];
        doc["config"]["kernel"] = s.kernel;
        doc["config"]["generator"] = "splitmix64";
        doc["final"] = {{"average_cost", avg}, {"gain", report::to_json(exact)}};
        out << doc.dump(2) << "\n";
    } else {
        text_header(out, "simulate", s, m);
        out << "policy " << format_policy(m, g) << " under the " << s.kernel << " kernel, "
            << s.sim_horizon << " steps from state " << m.states[initial] << ", seed " << s.seed
            << " (splitmix64)\n";
        out << "empirical average cost = " << report::num(avg) << "\n";
        out << "exact gain from " << m.states[initial] << " = " << report::num(exact(initial))
            << "\n";
    }
    return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Settings s;
    CLI::App app{"Robust average-cost Markov control under total-variation ambiguity", "rmdp"};
    app.require_subcommand(1);
    app.add_option("--format", s.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--deterministic", s.deterministic, "Suppress timestamps");
    app.add_option("--tol", s.tol, "Tolerance for ties, level grouping and residuals")
        ->check(CLI::PositiveNumber);
    app.add_option("--radius", s.radius, "Override the model radius (fractions allowed)");

    auto model_arg = [&](CLI::App* sub) {
        sub->add_option("model", s.model_path, "Model JSON file")->required();
    };

    auto* validate_cmd = app.add_subcommand("validate", "Check a model file");
    model_arg(validate_cmd);

    auto* solve = app.add_subcommand("solve", "Run robust policy iteration");
    model_arg(solve);
    solve->add_option("--algorithm", s.algorithm)->check(CLI::IsMember({"unichain", "general"}));
    solve->add_option("--g0", s.g0, "Initial policy, e.g. u1,u2,u2");
    solve->add_option("--anchor", s.anchor, "Unichain bias anchor state (default: last)");
    solve->add_option("--pin", s.pins, "Multichain bias pin state=value (repeatable)");
    solve->add_option("--max-iter", s.max_iter)->check(CLI::NonNegativeNumber);

    auto* finite = app.add_subcommand("finite", "Finite-horizon min-max recursion");
    model_arg(finite);
    finite->add_option("--horizon", s.horizon)->required();
    finite->add_option("--terminal", s.terminal, "Terminal values (default zeros)");

    auto* wk = app.add_subcommand("worst-kernel", "Worst-case kernel for a value vector");
    model_arg(wk);
    wk->add_option("--values", s.values)->required();

    auto* rmax = app.add_subcommand("rmax", "Radius threshold for irreducible worst cases");
    model_arg(rmax);
    rmax->add_option("--cap", s.cap, "Policy enumeration cap");

    auto* sweep = app.add_subcommand("sweep", "Solve over a list of radii");
    model_arg(sweep);
    sweep->add_option("--radii", s.radii)->required();
    sweep->add_option("--algorithm", s.algorithm)->check(CLI::IsMember({"unichain", "general"}));
    sweep->add_option("--g0", s.g0);
    sweep->add_option("--pin", s.pins);
    sweep->add_option("--max-iter", s.max_iter)->check(CLI::NonNegativeNumber);

    auto* sim = app.add_subcommand("simulate", "Monte-Carlo average cost of a policy");
    model_arg(sim);
    sim->add_option("--policy", s.policy)->required();
    sim->add_option("--horizon", s.sim_horizon)->required();
    sim->add_option("--seed", s.seed);
    sim->add_option("--initial", s.initial, "Initial state (default: first)");
    sim->add_option("--kernel", s.kernel)->check(CLI::IsMember({"nominal", "worst-case"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (s.tol) set_tolerance(*s.tol);
        if (validate_cmd->parsed()) return cmd_validate(s, out);
        if (solve->parsed()) return cmd_solve(s, out);
        if (finite->parsed()) return cmd_finite(s, out);
        if (wk->parsed()) return cmd_worst_kernel(s, out);
        if (rmax->parsed()) return cmd_rmax(s, out);
        if (sweep->parsed()) return cmd_sweep(s, out);
        if (sim->parsed()) return cmd_simulate(s, out);
    } catch (const Failure& f) {
        err << "error: " << f.what() << "\n";
        return f.code;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return validation_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return solver_failure;
    }
    return usage_error;
}

}  // namespace rmdp::cli
