#ifndef WONHAM_CORE_MATRIX_IO_HPP
#define WONHAM_CORE_MATRIX_IO_HPP

// Plain-text matrices: one row per line, entries separated by whitespace.
// Blank lines and lines starting with '#' are skipped.

#include <Eigen/Dense>

#include <istream>
#include <string>

namespace wonham {

Eigen::MatrixXd parse_matrix_text(std::istream& in);
Eigen::MatrixXd parse_matrix_text(const std::string& text);
Eigen::MatrixXd read_matrix_file(const std::string& path);

/// Rows of %.17g decimals, newline-terminated.
std::string format_matrix_text(const Eigen::MatrixXd& m);
void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace wonham

#endif  // WONHAM_CORE_MATRIX_IO_HPP
