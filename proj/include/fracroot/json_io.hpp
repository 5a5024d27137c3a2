#pragma once

// JSON encoding of FunctionModel and root lists (nlohmann::json).

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracroot/errors.hpp"
#include "fracroot/funcmodel.hpp"

namespace fracroot {

inline nlohmann::json function_to_json(const FunctionModel& f) {
  nlohmann::json j;
  j["reference_point"] = f.reference_point();
  j["power_terms"] = nlohmann::json::array();
  for (const auto& t : f.power_terms()) {
    j["power_terms"].push_back({{"re", t.coeff.real()}, {"im", t.coeff.imag()}, {"p", t.exponent}});
  }
  j["exp_terms"] = nlohmann::json::array();
  for (const auto& t : f.exp_terms()) {
    j["exp_terms"].push_back({{"coeff_re", t.coeff.real()},
                              {"coeff_im", t.coeff.imag()},
                              {"rate_re", t.rate.real()},
                              {"rate_im", t.rate.imag()}});
  }
  return j;
}

inline FunctionModel function_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("function JSON must be an object");
    std::vector<PowerTerm> powers;
    std::vector<ExpTerm> exps;
    if (j.contains("power_terms")) {
      for (const auto& t : j.at("power_terms")) {
        powers.push_back({{t.value("re", 0.0), t.value("im", 0.0)}, t.at("p").get<double>()});
      }
    }
    if (j.contains("exp_terms")) {
      for (const auto& t : j.at("exp_terms")) {
        exps.push_back({{t.value("coeff_re", 0.0), t.value("coeff_im", 0.0)},
                        {t.value("rate_re", 0.0), t.value("rate_im", 0.0)}});
      }
    }
    return FunctionModel(std::move(powers), std::move(exps), j.value("reference_point", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed function JSON: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid function: ") + e.what());
  }
}

/// Roots as [[re, im], ...] or {"roots": [...]}.
inline std::vector<Complex> roots_from_json(const nlohmann::json& j) {
  const nlohmann::json& arr = j.is_object() ? j.at("roots") : j;
  std::vector<Complex> roots;
  try {
    for (const auto& r : arr) {
      if (r.is_number()) roots.emplace_back(r.get<double>(), 0.0);
      else roots.emplace_back(r.at(0).get<double>(), r.at(1).get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed roots JSON: ") + e.what());
  }
  return roots;
}

inline nlohmann::json roots_to_json(const std::vector<Complex>& roots) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : roots) arr.push_back({r.real(), r.imag()});
  return arr;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace fracroot
