#include "mcarma/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mcarma/errors.hpp"

namespace mcarma {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  char* end = nullptr;
  const double x = t.empty() ? 0.0 : std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ParseError("config value for '" + key + "' is not a number: '" +
                     value + "'");
  return x;
}

long parse_long(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  char* end = nullptr;
  errno = 0;
  const long x = t.empty() ? 0 : std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw ParseError("config value for '" + key + "' is not an integer: '" +
                     value + "'");
  return x;
}

std::vector<std::string> bracketed_items(const std::string& key,
                                         const std::string& value) {
  const std::string t = trim(value);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw ParseError("config value for '" + key +
                     "' must be a bracketed list like [a, b]");
  const std::string inner = trim(t.substr(1, t.size() - 2));
  std::vector<std::string> items;
  if (inner.empty()) return items;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = inner.find(',', start);
    const std::string item = trim(
        comma == std::string::npos ? inner.substr(start)
                                   : inner.substr(start, comma - start));
    if (item.empty())
      throw ParseError("config value for '" + key + "' has an empty element");
    items.push_back(item);
    if (comma == std::string::npos) return items;
    start = comma + 1;
  }
}

} // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream is(text);
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) +
                       ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ParseError("config line " + std::to_string(lineno) +
                       ": empty key");
    if (!cfg.entries_.emplace(key, value).second)
      throw ParseError("config line " + std::to_string(lineno) +
                       ": duplicate key '" + key + "'");
  }
  return cfg;
}

Config Config::parse_file(const std::string& filename) {
  std::ifstream is(filename);
  if (!is)
    throw InvalidInputError("cannot open config file '" + filename + "'");
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse(buffer.str());
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::string Config::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw InvalidInputError("config is missing key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const {
  return parse_long(key, get_string(key));
}

long Config::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

Eigen::VectorXd Config::get_vector(const std::string& key) const {
  const std::vector<std::string> items = bracketed_items(key, get_string(key));
  Eigen::VectorXd v(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = parse_double(key, items[i]);
  return v;
}

std::vector<long> Config::get_int_list(const std::string& key) const {
  const std::vector<std::string> items = bracketed_items(key, get_string(key));
  std::vector<long> v(items.size());
  for (std::size_t i = 0; i < items.size(); ++i)
    v[i] = parse_long(key, items[i]);
  return v;
}

std::vector<std::string> Config::get_string_list(const std::string& key) const {
  return bracketed_items(key, get_string(key));
}

} // namespace mcarma
