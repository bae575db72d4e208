#pragma once
// Scenario files: INI-style configs naming a lattice, an operator family and
// the check suites to run. Parsing is strict — unknown sections, unknown keys
// and malformed values are reported with their line number so batch runs fail
// loudly instead of silently skipping work.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace relop {

struct ScenarioError : std::runtime_error {
  int line;
  ScenarioError(int ln, const std::string& msg)
      : std::runtime_error("line " + std::to_string(ln) + ": " + msg),
        line(ln) {}
};

struct Scenario {
  int d = 1;
  int n = 64;
  double box = 2.0 * M_PI;
  double m = 1.0;
  std::vector<double> alphas{0.5, 1.0};
  std::string potential = "smooth";  // zero | linear | smooth
  double amplitude = 1.0;
  int states = 8;
  std::uint64_t seed = 1;
  std::vector<std::string> suites{"kato"};
};

inline const std::set<std::string>& known_suites() {
  static const std::set<std::string> s{
      "kato",       "diamagnetic", "limits",   "bounds",
      "commutator", "quantize",    "kernels",  "subordination"};
  return s;
}

namespace detail {

inline std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = strip(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& v, int ln) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ScenarioError(ln, "expected a number, got '" + v + "'");
  }
}

inline long parse_int(const std::string& v, int ln) {
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ScenarioError(ln, "expected an integer, got '" + v + "'");
  }
}

}  // namespace detail

inline Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  std::string line, section;
  int ln = 0;
  bool saw_any = false;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    saw_any = true;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ScenarioError(ln, "unterminated section header");
      section = detail::strip(line.substr(1, line.size() - 2));
      if (section != "lattice" && section != "operator" &&
          section != "verify")
        throw ScenarioError(ln, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioError(ln, "expected 'key = value'");
    const std::string key = detail::strip(line.substr(0, eq));
    const std::string val = detail::strip(line.substr(eq + 1));
    if (section.empty())
      throw ScenarioError(ln, "key '" + key + "' outside any section");
    if (section == "lattice") {
      if (key == "d") {
        sc.d = int(detail::parse_int(val, ln));
        if (sc.d < 1 || sc.d > 3) throw ScenarioError(ln, "d must be 1..3");
      } else if (key == "n") {
        sc.n = int(detail::parse_int(val, ln));
        if (sc.n < 2) throw ScenarioError(ln, "n must be >= 2");
      } else if (key == "box") {
        sc.box = detail::parse_double(val, ln);
        if (sc.box <= 0.0) throw ScenarioError(ln, "box must be positive");
      } else {
        throw ScenarioError(ln, "unknown key '" + key + "' in [lattice]");
      }
    } else if (section == "operator") {
      if (key == "m") {
        sc.m = detail::parse_double(val, ln);
        if (sc.m < 0.0) throw ScenarioError(ln, "m must be >= 0");
      } else if (key == "alpha") {
        sc.alphas.clear();
        for (const auto& a : detail::split_list(val)) {
          const double x = detail::parse_double(a, ln);
          if (x <= 0.0 || x > 1.0)
            throw ScenarioError(ln, "alpha must lie in (0, 1]");
          sc.alphas.push_back(x);
        }
        if (sc.alphas.empty()) throw ScenarioError(ln, "empty alpha list");
      } else if (key == "potential") {
        if (val != "zero" && val != "linear" && val != "smooth")
          throw ScenarioError(ln, "potential must be zero|linear|smooth");
        sc.potential = val;
      } else if (key == "amplitude") {
        sc.amplitude = detail::parse_double(val, ln);
      } else {
        throw ScenarioError(ln, "unknown key '" + key + "' in [operator]");
      }
    } else {  // verify
      if (key == "states") {
        sc.states = int(detail::parse_int(val, ln));
        if (sc.states < 1) throw ScenarioError(ln, "states must be >= 1");
      } else if (key == "seed") {
        sc.seed = std::uint64_t(detail::parse_int(val, ln));
      } else if (key == "suites") {
        sc.suites = detail::split_list(val);
        if (sc.suites.empty()) throw ScenarioError(ln, "empty suite list");
        for (const auto& s : sc.suites)
          if (!known_suites().count(s))
            throw ScenarioError(ln, "unknown suite '" + s + "'");
      } else {
        throw ScenarioError(ln, "unknown key '" + key + "' in [verify]");
      }
    }
  }
  if (!saw_any) throw ScenarioError(0, "empty scenario file");
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  return parse_scenario(in);
}

// FNV-1a over a canonical rendering; stable across runs and platforms.
inline std::uint64_t scenario_hash(const Scenario& sc) {
  std::ostringstream os;
  os.precision(17);
  os << sc.d << '|' << sc.n << '|' << sc.box << '|' << sc.m << '|';
  for (double a : sc.alphas) os << a << ',';
  os << '|' << sc.potential << '|' << sc.amplitude << '|' << sc.states << '|'
     << sc.seed << '|';
  for (const auto& s : sc.suites) os << s << ',';
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace relop
