#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "rmdp/model_io.hpp"

#ifndef RMDP_FIXTURE_DIR
#error "RMDP_FIXTURE_DIR must point at the fixtures directory"
#endif

namespace oracle {

using Rational = boost::rational<std::int64_t>;

inline std::string fixture_path(const std::string& name) {
    return std::string(RMDP_FIXTURE_DIR) + "/" + name;
}

inline rmdp::McmModel load_fixture(const std::string& name) {
    auto p = rmdp::load_model(fixture_path(name));
    if (!p.ok()) throw std::runtime_error("bad fixture " + name);
    return p.model;
}

inline Rational parse_rational(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

// Exact nominal rows of a fixture: rows[u][x] is a vector of rationals.
inline std::vector<std::vector<std::vector<Rational>>> exact_kernel(const std::string& name) {
    std::ifstream in(fixture_path(name));
    nlohmann::json doc;
    in >> doc;
    const auto states = doc["states"].size();
    std::vector<std::vector<std::vector<Rational>>> out;
    for (const auto& u : doc["controls"]) {
        const auto& a = doc["kernel"][u.get<std::string>()];
        std::vector<std::vector<Rational>> rows(states, std::vector<Rational>(states));
        for (std::size_t i = 0; i < states * states; ++i) rows[i / states][i % states] = parse_rational(a[i]);
        out.push_back(rows);
    }
    return out;
}

inline Rational exact_radius(const std::string& name) {
    std::ifstream in(fixture_path(name));
    nlohmann::json doc;
    in >> doc;
    return parse_rational(doc["radius"]);
}

// Ninths matrix helper for expected kernels.
inline std::vector<std::vector<Rational>> ninths(std::initializer_list<std::initializer_list<int>> m) {
    std::vector<std::vector<Rational>> out;
    for (const auto& r : m) {
        std::vector<Rational> row;
        for (int v : r) row.emplace_back(v, 9);
        out.push_back(row);
    }
    return out;
}

}  // namespace oracle
