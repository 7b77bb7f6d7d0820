#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

namespace chainent::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t pos; (pos = s.find(sep, start)) != std::string::npos; start = pos + 1) {
    out.push_back(trim(s.substr(start, pos - start)));
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    T v{};
    if constexpr (std::is_same_v<T, double>) {
      v = std::stod(text, &pos);
    } else if constexpr (std::is_same_v<T, long>) {
      v = std::stol(text, &pos);
    } else {
      v = std::stoi(text, &pos);
    }
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("{}: '{}' is not a valid number", key, text));
  }
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) throw ConfigError(fmt::format("{}: empty list entry", key));
    out.push_back(parse_number<T>(key, part));
  }
  if (out.empty()) throw ConfigError(fmt::format("{}: empty list", key));
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"model", {"lambda", "q", "mode"}},
      {"geometry", {"n_x", "n_y"}},
      {"block", {"l_x", "l_y", "placement", "chains"}},
      {"run",
       {"grid", "quadrature_points", "tolerance", "threads", "output", "bits", "timing", "dense_cap"}},
  };
  return keys;
}

}  // namespace

ChainCouplings RunConfig::couplings() const {
  return ChainCouplings{ToeplitzCoeffs(lambda), ToeplitzCoeffs(q)};
}

Geometry RunConfig::geometry() const { return Geometry(n_x, n_y); }

Placement parse_placement(const std::string& text) {
  if (text == "corner") return Placement::corner();
  if (text == "centered") return Placement::centered();
  if (text.rfind("offset=", 0) == 0) {
    const int k = parse_number<int>("placement", text.substr(7));
    if (k < 0) throw ConfigError("placement: offset must be >= 0");
    return Placement::offset(k);
  }
  throw ConfigError(fmt::format("placement: expected corner|centered|offset=<k>, got '{}'", text));
}

ValidationMode parse_mode(const std::string& text) {
  if (text == "strict") return ValidationMode::Strict;
  if (text == "permissive") return ValidationMode::Permissive;
  throw ConfigError(fmt::format("mode: expected strict|permissive, got '{}'", text));
}

Grid parse_grid(const std::string& text) {
  Grid grid;
  bool have_x = false;
  bool have_y = false;
  for (const auto& part : split(text, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("grid: malformed part '{}'", part));
    const std::string name = trim(part.substr(0, eq));
    const std::string values = part.substr(eq + 1);
    if (name == "lx" && !have_x) {
      grid.l_x = parse_list<int>("grid.lx", values);
      have_x = true;
    } else if (name == "ly" && !have_y) {
      grid.l_y = parse_list<int>("grid.ly", values);
      have_y = true;
    } else {
      throw ConfigError(fmt::format("grid: unexpected or repeated axis '{}'", name));
    }
  }
  if (!have_x || !have_y) throw ConfigError("grid: both lx= and ly= are required");
  return grid;
}

RunConfig parse_config(std::istream& in) {
  std::map<std::string, std::map<std::string, std::string>> entries;
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(fmt::format("line {}: malformed section header", line_no));
      section = trim(line.substr(1, line.size() - 2));
      if (!known_keys().contains(section)) {
        throw ConfigError(fmt::format("line {}: unknown section [{}]", line_no, section));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key = value", line_no));
    if (section.empty()) throw ConfigError(fmt::format("line {}: key outside of a section", line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().at(section).contains(key)) {
      throw ConfigError(fmt::format("line {}: unknown key '{}' in [{}]", line_no, key, section));
    }
    if (!entries[section].emplace(key, value).second) {
      throw ConfigError(fmt::format("line {}: duplicate key '{}.{}'", line_no, section, key));
    }
  }

  auto find = [&](const std::string& sec, const std::string& key) -> const std::string* {
    auto s = entries.find(sec);
    if (s == entries.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };
  auto require = [&](const std::string& sec, const std::string& key) -> const std::string& {
    const std::string* v = find(sec, key);
    if (v == nullptr) throw ConfigError(fmt::format("missing required key {}.{}", sec, key));
    return *v;
  };

  RunConfig cfg;
  cfg.lambda = parse_list<double>("model.lambda", require("model", "lambda"));
  cfg.q = parse_list<double>("model.q", require("model", "q"));
  if (const auto* v = find("model", "mode")) cfg.mode = parse_mode(*v);
  cfg.n_x = parse_number<int>("geometry.n_x", require("geometry", "n_x"));
  cfg.n_y = parse_number<int>("geometry.n_y", require("geometry", "n_y"));

  if (entries.contains("block")) {
    BlockConfig b;
    b.l_x = parse_number<int>("block.l_x", require("block", "l_x"));
    b.l_y = parse_number<int>("block.l_y", require("block", "l_y"));
    if (const auto* v = find("block", "chains")) b.chains = parse_list<int>("block.chains", *v);
    if (const auto* v = find("block", "placement")) cfg.placement = parse_placement(*v);
    cfg.block = std::move(b);
  }

  if (const auto* v = find("run", "grid")) cfg.grid = parse_grid(*v);
  if (const auto* v = find("run", "quadrature_points")) {
    cfg.quadrature_points = parse_number<int>("run.quadrature_points", *v);
    if (cfg.quadrature_points < 2) throw ConfigError("run.quadrature_points must be >= 2");
  }
  if (const auto* v = find("run", "tolerance")) {
    cfg.tolerance = parse_number<double>("run.tolerance", *v);
    if (!(cfg.tolerance > 0.0)) throw ConfigError("run.tolerance must be positive");
  }
  if (const auto* v = find("run", "threads")) {
    cfg.threads = parse_number<int>("run.threads", *v);
    if (cfg.threads < 1) throw ConfigError("run.threads must be >= 1");
  }
  if (const auto* v = find("run", "output")) cfg.output = *v;
  if (const auto* v = find("run", "bits")) cfg.bits = parse_bool("run.bits", *v);
  if (const auto* v = find("run", "timing")) cfg.timing = parse_bool("run.timing", *v);
  if (const auto* v = find("run", "dense_cap")) cfg.dense_cap = parse_number<long>("run.dense_cap", *v);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  return parse_config(in);
}

}  // namespace chainent::cli
