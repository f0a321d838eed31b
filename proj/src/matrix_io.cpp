// ============================================================================
// matrix_io.cpp — CSV + JSON sidecar I/O
// ============================================================================
#include "termrev/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace termrev {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

// Shared CSV scaffold: calls `parse(text, row, col)` per cell.
template <typename Parse>
void read_csv_cells(const std::string& path, int& rows, int& cols, Parse parse) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    rows = 0;
    cols = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;  // tolerate trailing blank lines
        const auto fields = split_csv_line(line);
        if (cols == -1)
            cols = static_cast<int>(fields.size());
        else if (static_cast<int>(fields.size()) != cols)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": row has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(cols));
        for (int c = 0; c < cols; ++c) parse(fields[c], rows, c, lineno);
        ++rows;
    }
    if (rows == 0 || cols <= 0) throw std::runtime_error(path + ": no data rows");
}

}  // namespace

RealMatrix read_real_csv(const std::string& path) {
    RealMatrix m;
    read_csv_cells(path, m.rows, m.cols,
                   [&](const std::string& text, int /*r*/, int /*c*/, int lineno) {
                       try {
                           size_t used = 0;
                           const double v = std::stod(text, &used);
                           if (used != text.size()) throw std::invalid_argument(text);
                           m.values.push_back(v);
                       } catch (const std::exception&) {
                           throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                                    ": bad number '" + text + "'");
                       }
                   });
    return m;
}

void write_real_csv(const RealMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            if (c) out << ',';
            out << format_double(m.at(r, c));
        }
        out << '\n';
    }
}

QuantizedMatrix read_quantized_csv(const std::string& csv_path) {
    QuantizedMatrix m;
    read_csv_cells(csv_path, m.rows, m.cols,
                   [&](const std::string& text, int /*r*/, int /*c*/, int lineno) {
                       try {
                           size_t used = 0;
                           const int v = std::stoi(text, &used);
                           if (used != text.size()) throw std::invalid_argument(text);
                           m.values.push_back(v);
                       } catch (const std::exception&) {
                           throw std::runtime_error(csv_path + ":" + std::to_string(lineno) +
                                                    ": bad integer '" + text + "'");
                       }
                   });

    const std::string sidecar = csv_path + ".json";
    std::ifstream in(sidecar);
    if (!in) throw std::runtime_error("cannot open sidecar " + sidecar);
    nlohmann::json j;
    try {
        in >> j;
        m.scheme.bitwidth = j.at("bitwidth").get<int>();
        m.scheme.scale_exponent = j.at("scale_exponent").get<int>();
        const int rows = j.at("rows").get<int>();
        const int cols = j.at("cols").get<int>();
        if (rows != m.rows || cols != m.cols)
            throw std::runtime_error("sidecar declares " + std::to_string(rows) + "x" +
                                     std::to_string(cols) + " but CSV holds " +
                                     std::to_string(m.rows) + "x" + std::to_string(m.cols));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(sidecar + ": " + e.what());
    }
    m.validate();
    return m;
}

void write_quantized_csv(const QuantizedMatrix& m, const std::string& csv_path) {
    m.validate();
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            if (c) out << ',';
            out << m.at(r, c);
        }
        out << '\n';
    }
    nlohmann::json j = {{"bitwidth", m.scheme.bitwidth},
                        {"scale_exponent", m.scheme.scale_exponent},
                        {"rows", m.rows},
                        {"cols", m.cols}};
    std::ofstream side(csv_path + ".json");
    if (!side) throw std::runtime_error("cannot write " + csv_path + ".json");
    side << j.dump(2) << '\n';
}

}  // namespace termrev
