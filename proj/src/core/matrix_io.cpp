#include "core/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "core/error.hpp"

namespace wonham {

Eigen::MatrixXd parse_matrix_text(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::vector<double> row;
        std::string token;
        while (ls >> token) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size())
                fail(ErrorCode::Io, "line " + std::to_string(line_no) + ": bad number '" + token + "'");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(ErrorCode::DimensionMismatch, "line " + std::to_string(line_no) + ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(ErrorCode::Io, "matrix text has no rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

Eigen::MatrixXd parse_matrix_text(const std::string& text) {
    std::istringstream in(text);
    return parse_matrix_text(in);
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open " + path);
    return parse_matrix_text(in);
}

std::string format_matrix_text(const Eigen::MatrixXd& m) {
    std::string out;
    char buf[32];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            if (j > 0) out += ' ';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, "cannot write " + path);
    out << format_matrix_text(m);
    if (!out) fail(ErrorCode::Io, "write failed for " + path);
}

}  // namespace wonham
