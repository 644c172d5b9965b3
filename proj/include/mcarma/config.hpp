#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace mcarma {

/// Flat "key = value" configuration text; arrays are bracketed,
/// e.g. "theta0 = [-2, -2, -1]". '#' starts a comment.
class Config {
public:
  static Config parse(const std::string& text);
  static Config parse_file(const std::string& filename);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  Eigen::VectorXd get_vector(const std::string& key) const;
  std::vector<long> get_int_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

private:
  std::map<std::string, std::string> entries_;
};

} // namespace mcarma
