#include "fpdyn/validator.hpp"

#include <algorithm>

#include <json.hpp>

namespace fpdyn {

std::string ValidationReport::summary() const {
  std::string out;
  out += "ok: ";
  out += ok ? "true" : "false";
  out += "\nsteps_checked: " + std::to_string(steps_checked) + "\n";
  for (const auto& [name, pass] : structural_checks)
    out += "check " + name + ": " + (pass ? "pass" : "fail") + "\n";
  if (first_violation) out += "first_violation: " + first_violation->describe() + "\n";
  return out;
}

std::string ValidationReport::to_json() const {
  nlohmann::json j;
  j["ok"] = ok;
  j["stepsChecked"] = steps_checked;
  if (first_violation) {
    nlohmann::json v;
    v["t"] = first_violation->t + 1;  // 1-based step index on the wire
    v["side"] = first_violation->side == ViolationSide::Row ? "row" : "col";
    v["chosenIndex"] = first_violation->index + 1;
    std::vector<int> ties;
    ties.reserve(first_violation->tie_set.size());
    for (int k : first_violation->tie_set) ties.push_back(k + 1);
    v["tieSet"] = ties;
    j["firstViolation"] = v;
  } else {
    j["firstViolation"] = nullptr;
  }
  j["structuralChecks"] = structural_checks;
  return j.dump(2);
}

Trace permute_trace(const Trace& trace, const std::vector<int>& sigma) {
  if (trace.header.matrix.kind != MatrixDescriptor::Kind::Identity)
    throw std::invalid_argument("permute_trace only applies to identity-game traces");
  const int n = trace.header.matrix.n;
  if (static_cast<int>(sigma.size()) != n)
    throw std::invalid_argument("permutation size does not match the game dimension");
  std::vector<bool> seen(sigma.size(), false);
  for (int v : sigma) {
    if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("sigma is not a permutation");
    seen[v] = true;
  }
  Trace out = trace;
  for (Step& s : out.steps) {
    s.i = sigma[s.i];
    s.j = sigma[s.j];
  }
  return out;
}

}  // namespace fpdyn
