#include <cctype>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"

namespace curvelab::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] void bad(int line, const std::string& msg) {
  fail(ErrorKind::configuration,
       "config line " + std::to_string(line) + ": " + msg);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && line[i] == '#') return line.substr(0, i);
  }
  return line;
}

// Splits at commas outside quotes, braces and brackets.
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  bool quoted = false;
  std::string cur;
  for (char ch : s) {
    if (ch == '"') quoted = !quoted;
    if (!quoted) {
      if (ch == '{' || ch == '[') ++depth;
      if (ch == '}' || ch == ']') --depth;
      if (ch == ',' && depth == 0) {
        parts.push_back(cur);
        cur.clear();
        continue;
      }
    }
    cur += ch;
  }
  parts.push_back(cur);
  return parts;
}

std::string unquote(const std::string& s) {
  const std::string t = trim(s);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
    return t.substr(1, t.size() - 2);
  }
  return t;
}

// A plain number, or a multiple/fraction of pi such as -pi/2 or 2*pi.
double parse_number(const std::string& raw, int line) {
  std::string s = trim(unquote(raw));
  if (s.empty()) bad(line, "empty number");
  double sign = 1.0;
  if (s[0] == '-' || s[0] == '+') {
    if (s[0] == '-') sign = -1.0;
    s = trim(s.substr(1));
  }
  const auto pi_pos = s.find("pi");
  if (pi_pos != std::string::npos) {
    double factor = 1.0;
    double divisor = 1.0;
    const std::string before = trim(s.substr(0, pi_pos));
    const std::string after = trim(s.substr(pi_pos + 2));
    if (!before.empty()) {
      if (before.back() != '*') bad(line, "cannot parse '" + raw + "'");
      factor = parse_number(before.substr(0, before.size() - 1), line);
    }
    if (!after.empty()) {
      if (after.front() != '/') bad(line, "cannot parse '" + raw + "'");
      divisor = parse_number(after.substr(1), line);
    }
    return sign * factor * std::numbers::pi / divisor;
  }
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') bad(line, "not a number: '" + raw + "'");
  return sign * value;
}

std::vector<double> parse_list(const std::string& raw, int line) {
  std::string s = trim(raw);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') bad(line, "unterminated list");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<double> out;
  for (const auto& part : split_top(s)) out.push_back(parse_number(part, line));
  return out;
}

std::map<std::string, double> parse_map(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') {
    bad(line, "expected {key: value, ...}");
  }
  std::map<std::string, double> out;
  const std::string body = trim(s.substr(1, s.size() - 2));
  if (body.empty()) return out;
  for (const auto& part : split_top(body)) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) bad(line, "expected key: value in '" + part + "'");
    out[unquote(part.substr(0, colon))] = parse_number(part.substr(colon + 1), line);
  }
  return out;
}

int parse_int(const std::string& raw, int line) {
  const double v = parse_number(raw, line);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    bad(line, "expected an integer, got '" + raw + "'");
  }
  return static_cast<int>(v);
}

Domain parse_domain(const std::string& raw, int line) {
  const auto v = parse_list(raw, line);
  if (v.size() != 4) bad(line, "domain needs u_min, u_max, v_min, v_max");
  return Domain{v[0], v[1], v[2], v[3]};
}

void assign(RunConfig& c, const std::string& key, const std::string& value,
            int line) {
  if (key == "surface") {
    c.surface = unquote(value);
  } else if (key == "params") {
    for (const auto& [k, v] : parse_map(value, line)) c.params[k] = v;
  } else if (key == "domain") {
    c.domain = parse_domain(value, line);
  } else if (key == "form") {
    c.form = parse_form(unquote(value));
  } else if (key == "field") {
    c.field = unquote(value);
  } else if (key == "target") {
    c.target = unquote(value);
  } else if (key == "at") {
    const auto v = parse_list(value, line);
    if (v.size() != 2) bad(line, "at needs two coordinates");
    c.at = SamplePoint{v[0], v[1]};
  } else if (key == "grid") {
    c.grid = parse_int(value, line);
  } else if (key == "strategy") {
    c.strategy = parse_strategy(unquote(value));
  } else if (key == "count") {
    c.count = parse_int(value, line);
  } else if (key == "seed") {
    const int s = parse_int(value, line);
    if (s < 0) bad(line, "seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "tau_pass") {
    c.thresholds.tau_pass = parse_number(value, line);
  } else if (key == "tau_fail") {
    c.thresholds.tau_fail = parse_number(value, line);
  } else if (key == "k_min") {
    c.k_min = parse_number(value, line);
  } else if (key == "order") {
    c.jet_order = parse_int(value, line);
  } else if (key == "workers") {
    c.workers = parse_int(value, line);
  } else if (key == "pipeline") {
    c.pipeline = unquote(value);
  } else if (key == "out") {
    c.out_dir = unquote(value);
  } else if (key == "format") {
    c.format = unquote(value);
  } else {
    bad(line, "unknown key '" + key + "'");
  }
}

}  // namespace

void apply_config_text(const std::string& text, RunConfig& base) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(strip_comment(raw));
    if (content.empty()) continue;
    // "surface = x, params = {...}" holds two assignments; a segment without
    // '=' continues the previous value ("at = 0.3, 0.2").
    std::vector<std::string> assignments;
    for (const auto& seg : split_top(content)) {
      if (seg.find('=') != std::string::npos || assignments.empty()) {
        assignments.push_back(seg);
      } else {
        assignments.back() += "," + seg;
      }
    }
    for (const auto& a : assignments) {
      const auto eq = a.find('=');
      if (eq == std::string::npos) bad(line, "expected key = value");
      const std::string key = trim(a.substr(0, eq));
      const std::string value = trim(a.substr(eq + 1));
      if (value.empty()) bad(line, "missing value for '" + key + "'");
      assign(base, key, value, line);
    }
  }
}

void apply_config_file(const std::string& path, RunConfig& base) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::configuration, "cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(text.str(), base);
}

std::string resolve_out_dir(const std::optional<std::string>& flag,
                            const std::string& from_file) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("CURVELAB_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return from_file.empty() ? "curvelab-reports" : from_file;
}

}  // namespace curvelab::cli
