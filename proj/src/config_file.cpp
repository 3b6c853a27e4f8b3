#include "dra/config_file.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "dra/errors.hpp"

namespace dra {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not readable: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

KeyValueConfig KeyValueConfig::parse_text(const std::string& text,
                                          const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected `key = value`, got `" + line + "`");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.values_[key] = val;
  }
  return cfg;
}

std::optional<std::string> KeyValueConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& dflt) const {
  return raw(key).value_or(dflt);
}

double KeyValueConfig::get_double(const std::string& key, double dflt) const {
  const auto v = raw(key);
  if (!v) return dflt;
  try {
    size_t pos = 0;
    const double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key `" + key + "`: not a number: `" + *v + "`");
  }
}

int KeyValueConfig::get_int(const std::string& key, int dflt) const {
  const auto v = raw(key);
  if (!v) return dflt;
  try {
    size_t pos = 0;
    const long d = std::stol(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(d);
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key `" + key + "`: not an integer: `" + *v + "`");
  }
}

uint64_t KeyValueConfig::get_u64(const std::string& key, uint64_t dflt) const {
  const auto v = raw(key);
  if (!v) return dflt;
  try {
    size_t pos = 0;
    const unsigned long long d = std::stoull(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing characters");
    return static_cast<uint64_t>(d);
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key `" + key + "`: not an unsigned integer: `" +
                      *v + "`");
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool dflt) const {
  const auto v = raw(key);
  if (!v) return dflt;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError(origin_ + ": key `" + key + "`: not a boolean: `" + *v + "`");
}

}  // namespace dra
