#include "fsilab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fsilab {

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) { return static_cast<int>(i); }
    }
    return -1;
}

std::vector<double> CsvTable::column_values(const std::string& name) const {
    const int c = column(name);
    if (c < 0) { throw std::runtime_error("csv: missing column '" + name + "'"); }
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) { out.push_back(row[c]); }
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream f(path);
    if (!f) { throw std::runtime_error("csv: cannot open '" + path + "' for writing"); }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) { f << ','; }
        f << header[i];
    }
    f << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) { f << ','; }
            f << row[i];
        }
        f << '\n';
    }
    if (!f) { throw std::runtime_error("csv: write failure on '" + path + "'"); }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) { throw std::runtime_error("csv: cannot open '" + path + "'"); }
    CsvTable table;
    std::string line;
    if (!std::getline(f, line)) { throw std::runtime_error("csv: empty file '" + path + "'"); }
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) { table.header.push_back(cell); }
    }
    int line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) { continue; }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) { throw std::invalid_argument(cell); }
            } catch (const std::exception&) {
                throw std::runtime_error("csv: non-numeric cell '" + cell + "' at " + path +
                                         ":" + std::to_string(line_no));
            }
        }
        if (row.size() != table.header.size()) {
            throw std::runtime_error("csv: column count mismatch at " + path + ":" +
                                     std::to_string(line_no));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace fsilab
