#pragma once

#include <string>
#include <vector>

namespace fsilab {

// 17 significant digits round-trips doubles exactly.
std::string format_double(double v, int precision = 17);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 when absent
    std::vector<double> column_values(const std::string& name) const;
};

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

CsvTable read_csv(const std::string& path);

}  // namespace fsilab
