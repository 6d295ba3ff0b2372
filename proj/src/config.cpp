#include "aerosol/config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace aerosol {

namespace {

// Full key schema. A key not matching any entry is rejected at parse time.
const char* kSchema[] = {
    "room.x.length", "room.x.diffusivity", "room.x.deposition_lo", "room.x.deposition_hi",
    "room.y.length", "room.y.diffusivity", "room.y.deposition_lo", "room.y.deposition_hi",
    "room.z.length", "room.z.diffusivity", "room.z.deposition_lo", "room.z.deposition_hi",
    "source.type", "source.position", "source.release_time", "source.strength",
    "source.plane_x", "source.center_y", "source.center_z", "source.radius",
    "source.start", "source.end",
    "solver.modes", "solver.tol",
    "quadrature.abs_tol", "quadrature.gauss_nodes",
    "eval.times",
    "probe.x", "probe.y", "probe.z",
    "line.axes", "line.count",
    "point.axis",
    "sampler.center", "sampler.edges", "sampler.interval",
    "detector.eta", "detector.gamma", "detector.sigma2",
    "detector.gamma_db", "detector.gamma_linear", "detector.q_p",
    "pmd.times",
    "sweep.centers_x",
    "truncation.times", "truncation.counts", "truncation.reference", "truncation.points",
    "output.prefix",
};

bool known_key(const std::string& key) {
  for (const char* s : kSchema)
    if (key == s) return true;
  return false;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> tokenize(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : value) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_double(const std::string& tok, const std::string& key) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config." + key + ": not a number: '" + tok + "'");
  }
}

std::string canon_number(const std::string& tok) {
  // numbers re-rendered as %.17g so serialization is canonical
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) return tok;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  } catch (const std::exception&) {
    return tok;
  }
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!known_key(key))
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (cfg.values_.count(key))
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("config." + key + ": required key missing");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  auto toks = tokenize(get_string(key));
  if (toks.size() != 1) throw ValidationError("config." + key + ": expected a single number");
  return parse_double(toks[0], key);
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  double v = get_double(key);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw ValidationError("config." + key + ": expected an integer");
  return i;
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> Config::get_list(const std::string& key) const {
  auto toks = tokenize(get_string(key));
  std::vector<double> out;
  if (!toks.empty() && toks[0] == "linspace") {
    if (toks.size() != 4)
      throw ValidationError("config." + key + ": linspace needs 'linspace a b n'");
    double a = parse_double(toks[1], key), b = parse_double(toks[2], key);
    int n = static_cast<int>(parse_double(toks[3], key));
    if (n < 1) throw ValidationError("config." + key + ": linspace count must be >= 1");
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1));
    return out;
  }
  for (const auto& t : toks) out.push_back(parse_double(t, key));
  if (out.empty()) throw ValidationError("config." + key + ": empty list");
  return out;
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  return has(key) ? get_list(key) : fallback;
}

std::vector<std::string> Config::get_words(const std::string& key) const {
  return tokenize(get_string(key));
}

void Config::set(const std::string& key, const std::string& value) {
  if (!known_key(key)) throw ValidationError("config: unknown key '" + key + "'");
  values_[key] = value;
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    out += k;
    out += " =";
    for (const auto& tok : tokenize(v)) {
      out += ' ';
      out += canon_number(tok);
    }
    out += '\n';
  }
  return out;
}

std::uint64_t Config::hash() const {
  std::string s = serialize();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace aerosol
