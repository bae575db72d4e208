#pragma once
// Deterministic report serialization. JSON is written with a fixed key order
// and %.17g number formatting so identical runs produce byte-identical files.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "relop/verify.hpp"

namespace relop {
namespace detail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline std::string json_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s == "inf") return "1e308";
  if (s == "-inf") return "-1e308";
  if (s == "nan" || s == "-nan") return "null";
  return s;
}

}  // namespace detail

inline std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline void write_report_json(std::ostream& os, std::uint64_t scenario_hash,
                              const std::vector<CheckResult>& checks) {
  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c.passed();
  os << "{\n";
  os << "  \"scenario_hash\": \"" << hash_hex(scenario_hash) << "\",\n";
  os << "  \"passed\": " << (all_pass ? "true" : "false") << ",\n";
  os << "  \"checks\": [\n";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    os << "    {\n";
    os << "      \"name\": \"" << detail::json_escape(c.name) << "\",\n";
    os << "      \"claim\": \"" << detail::json_escape(c.claim) << "\",\n";
    os << "      \"status\": \"" << c.status << "\",\n";
    os << "      \"max_violation\": " << detail::json_number(c.max_violation)
       << ",\n";
    os << "      \"tolerance\": " << detail::json_number(c.tolerance)
       << ",\n";
    os << "      \"samples\": " << c.samples << ",\n";
    os << "      \"metrics\": {";
    for (std::size_t k = 0; k < c.metrics.size(); ++k) {
      if (k) os << ", ";
      os << "\"" << detail::json_escape(c.metrics[k].first)
         << "\": " << detail::json_number(c.metrics[k].second);
    }
    os << "}\n";
    os << "    }" << (i + 1 < checks.size() ? "," : "") << "\n";
  }
  os << "  ]\n";
  os << "}\n";
}

inline void write_summary_table(std::ostream& os,
                                const std::vector<CheckResult>& checks) {
  std::size_t w = 4;
  for (const auto& c : checks) w = std::max(w, c.name.size());
  for (const auto& c : checks) {
    os << c.name;
    for (std::size_t k = c.name.size(); k < w + 2; ++k) os << ' ';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-11s %10.3e  (tol %.1e, n=%ld)\n",
                  c.status.c_str(), c.max_violation, c.tolerance, c.samples);
    os << buf;
  }
}

}  // namespace relop
