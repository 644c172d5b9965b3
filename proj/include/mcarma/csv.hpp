#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "mcarma/levy_sim.hpp"

namespace mcarma {

/// Path CSV: header "k,y1,...,ym", one row per observation, 17 significant
/// digits.
void write_path_csv(const SamplePath& path, std::ostream& os);
void write_path_csv(const SamplePath& path, const std::string& filename);
SamplePath read_path_csv(std::istream& is, double delta);
SamplePath read_path_csv(const std::string& filename, double delta);

/// Matrix CSV: plain rows of comma-separated values, 17 significant digits.
void write_matrix_csv(const Eigen::MatrixXd& M, std::ostream& os);

/// Format a double with 17 significant digits (shortest round-trip superset).
std::string format_double(double x);

} // namespace mcarma
