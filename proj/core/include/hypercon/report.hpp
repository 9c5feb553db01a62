#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

namespace hypercon {

/// One bound or identity verification.  Every check carries the two sides
/// and the slack; consumers never see a bare boolean.
struct CheckRecord {
  std::string check;
  std::string instance;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs (negative means violated)
  bool ok = false;
  nlohmann::ordered_json details;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["check"] = check;
    j["instance"] = instance;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["slack"] = slack;
    j["ok"] = ok;
    if (!details.is_null()) j["details"] = details;
    return j;
  }

  static CheckRecord one_sided(std::string check, std::string instance, double lhs,
                               double rhs, double rel_tol = 1e-6) {
    CheckRecord r;
    r.check = std::move(check);
    r.instance = std::move(instance);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.ok = lhs <= rhs + rel_tol * (std::abs(rhs) + 1.0);
    return r;
  }
};

inline nlohmann::ordered_json to_json(const std::vector<CheckRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) arr.push_back(r.to_json());
  return arr;
}

}  // namespace hypercon
