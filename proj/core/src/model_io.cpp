#include "rmdp/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rmdp {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_decimal(const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
}

std::vector<std::string> split(const std::string& text, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (seps.find(c) != std::string::npos) {
            if (!trim(cur).empty()) out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

}  // namespace

double parse_number(const std::string& text) {
    const std::string s = trim(text);
    try {
        const auto slash = s.find('/');
        if (slash == std::string::npos) return parse_decimal(s);
        const double num = parse_decimal(trim(s.substr(0, slash)));
        const double den = parse_decimal(trim(s.substr(slash + 1)));
        if (den == 0.0) throw std::invalid_argument("zero denominator");
        return num / den;
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: \"" + text + "\"");
    }
}

double parse_number(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_number(j.get<std::string>());
    throw std::invalid_argument("expected a number or a fraction string, got " + j.dump());
}

ParsedModel parse_model(const json& doc) {
    ParsedModel out;
    auto& m = out.model;
    auto& errs = out.errors;
    auto fail = [&](std::string where, std::string what) {
        errs.push_back({std::move(where), std::move(what)});
    };

    if (!doc.is_object()) {
        fail("document", "model file must be a JSON object");
        return out;
    }
    for (const char* key : {"states", "controls", "kernel", "cost", "radius"})
        if (!doc.contains(key)) fail(key, "missing key");
    if (!errs.empty()) return out;

    try {
        m.states = doc.at("states").get<std::vector<std::string>>();
        m.controls = doc.at("controls").get<std::vector<std::string>>();
    } catch (const json::exception&) {
        fail("states/controls", "must be arrays of strings");
        return out;
    }
    const int n = m.n_states();
    const int k = m.n_controls();

    try {
        m.radius = parse_number(doc.at("radius"));
    } catch (const std::exception& e) {
        fail("radius", e.what());
    }

    m.feasible.assign(n, {});
    const json feas = doc.value("feasible", json::object());
    if (!feas.is_object()) fail("feasible", "must be an object mapping states to control lists");
    for (int x = 0; x < n; ++x) {
        if (!feas.is_object() || !feas.contains(m.states[x])) {
            for (int u = 0; u < k; ++u) m.feasible[x].push_back(u);
            continue;
        }
        const json& list = feas.at(m.states[x]);
        if (!list.is_array()) {
            fail("feasible[" + m.states[x] + "]", "must be an array of controls");
            continue;
        }
        std::vector<bool> on(k, false);
        for (const auto& c : list) {
            const int u = c.is_string() ? m.control_index(c.get<std::string>()) : -1;
            if (u < 0)
                fail("feasible[" + m.states[x] + "]", "unknown control " + c.dump());
            else
                on[u] = true;
        }
        for (int u = 0; u < k; ++u)
            if (on[u]) m.feasible[x].push_back(u);
    }
    if (feas.is_object())
        for (const auto& [name, _] : feas.items())
            if (m.state_index(name) < 0) fail("feasible", "unknown state " + name);

    const json& kern = doc.at("kernel");
    const json& cost = doc.at("cost");
    if (!kern.is_object() || !cost.is_object()) {
        fail("kernel/cost", "must be objects keyed by control");
        return out;
    }
    m.nominal.assign(k, Matrix::Zero(n, n));
    m.cost = Matrix::Zero(n, k);
    for (int u = 0; u < k; ++u) {
        const std::string& name = m.controls[u];
        if (!kern.contains(name)) {
            fail("kernel[" + name + "]", "missing matrix");
        } else {
            const json& a = kern.at(name);
            if (!a.is_array() || a.size() != static_cast<std::size_t>(n) * n) {
                fail("kernel[" + name + "]",
                     "expected a row-major array of " + std::to_string(n * n) + " entries");
            } else {
                for (int i = 0; i < n * n; ++i) {
                    try {
                        m.nominal[u](i / n, i % n) = parse_number(a[i]);
                    } catch (const std::exception& e) {
                        fail("kernel[" + name + "]", e.what());
                    }
                }
            }
        }
        if (!cost.contains(name)) {
            fail("cost[" + name + "]", "missing cost vector");
        } else {
            const json& c = cost.at(name);
            if (!c.is_array() || c.size() != static_cast<std::size_t>(n)) {
                fail("cost[" + name + "]", "expected " + std::to_string(n) + " entries");
            } else {
                for (int x = 0; x < n; ++x) {
                    try {
                        m.cost(x, u) = parse_number(c[x]);
                    } catch (const std::exception& e) {
                        fail("cost[" + name + "]", e.what());
                    }
                }
            }
        }
    }
    for (const auto& [name, _] : kern.items())
        if (m.control_index(name) < 0) fail("kernel", "unknown control " + name);
    return out;
}

ParsedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ParsedModel out;
        out.errors.push_back({path, "cannot open file"});
        return out;
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        ParsedModel out;
        out.errors.push_back({path, std::string("malformed JSON: ") + e.what()});
        return out;
    }
    return parse_model(doc);
}

json model_to_json(const McmModel& m) {
    json doc;
    doc["states"] = m.states;
    doc["controls"] = m.controls;
    json feas = json::object();
    for (int x = 0; x < m.n_states(); ++x) {
        json list = json::array();
        for (int u : m.feasible[x]) list.push_back(m.controls[u]);
        feas[m.states[x]] = list;
    }
    doc["feasible"] = feas;
    json kern = json::object();
    json cost = json::object();
    for (int u = 0; u < m.n_controls(); ++u) {
        json a = json::array();
        for (int i = 0; i < m.n_states(); ++i)
            for (int j = 0; j < m.n_states(); ++j) a.push_back(m.nominal[u](i, j));
        kern[m.controls[u]] = a;
        json c = json::array();
        for (int x = 0; x < m.n_states(); ++x) c.push_back(m.cost(x, u));
        cost[m.controls[u]] = c;
    }
    doc["kernel"] = kern;
    doc["cost"] = cost;
    doc["radius"] = m.radius;
    return doc;
}

Policy parse_policy(const McmModel& m, const std::string& text) {
    const auto names = split(text, ", ()");
    if (static_cast<int>(names.size()) != m.n_states())
        throw std::invalid_argument("policy \"" + text + "\" must list " +
                                    std::to_string(m.n_states()) + " controls");
    Policy g(names.size());
    for (std::size_t x = 0; x < names.size(); ++x) {
        g[x] = m.control_index(names[x]);
        if (g[x] < 0)
            throw std::invalid_argument("unknown control " + names[x] + " for state " +
                                        m.states[x]);
    }
    check_policy(m, g);
    return g;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& tok : split(text, ", \t()")) out.push_back(parse_number(tok));
    return out;
}

}  // namespace rmdp
