#include "dsf/matrix_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "dsf/error.hpp"

namespace dsf::io {

namespace {

std::vector<double> parse_numbers(std::string_view line, std::size_t line_no) {
    std::vector<double> out;
    std::string cell;
    std::istringstream in{std::string(line)};
    while (std::getline(in, cell, ',')) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
        if (cell.empty() || end == cell.c_str() || *end != '\0')
            throw InvalidInput("matrix csv line " + std::to_string(line_no) + ": bad number '" + cell + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string matrix_to_csv(const CMatrix& m) {
    std::string out = std::to_string(m.rows()) + "," + std::to_string(m.cols()) + "\n";
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", j ? "," : "", m(i, j).real(), m(i, j).imag());
            out += buf;
        }
        out += "\n";
    }
    return out;
}

CMatrix matrix_from_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw InvalidInput("matrix csv is empty");
    const auto header = parse_numbers(line, line_no);
    if (header.size() != 2 || header[0] < 0 || header[1] < 0 || header[0] != static_cast<long>(header[0]) ||
        header[1] != static_cast<long>(header[1]))
        throw InvalidInput("matrix csv header must be 'rows,cols'");
    const auto rows = static_cast<Eigen::Index>(header[0]);
    const auto cols = static_cast<Eigen::Index>(header[1]);

    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!next_line()) throw InvalidInput("matrix csv has fewer than " + std::to_string(rows) + " rows");
        const auto values = parse_numbers(line, line_no);
        if (values.size() != static_cast<std::size_t>(2 * cols))
            throw InvalidInput("matrix csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(2 * cols) + " numbers");
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = Complex(values[static_cast<std::size_t>(2 * j)], values[static_cast<std::size_t>(2 * j + 1)]);
    }
    if (next_line()) throw InvalidInput("matrix csv has more than " + std::to_string(rows) + " rows");
    return m;
}

void write_matrix(const CMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << matrix_to_csv(m);
    if (!out) throw IoError("write to " + path.string() + " failed");
}

CMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return matrix_from_csv(buf.str());
}

}  // namespace dsf::io
