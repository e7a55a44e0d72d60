#include "emk/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "emk/errors.hpp"

namespace emk {

void write_csv(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw IoError("write_csv: cannot open " + path);
    char buf[64];
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << buf;
            if (j + 1 < m.cols()) out << ',';
        }
        out << '\n';
    }
    if (!out) throw IoError("write_csv: write failed for " + path);
}

Matrix read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_csv: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            const std::string field = line.substr(pos, next - pos);
            try {
                std::size_t used = 0;
                row.push_back(std::stod(field, &used));
                while (used < field.size() &&
                       (field[used] == ' ' || field[used] == '\r'))
                    ++used;
                if (used != field.size())
                    throw IoError("read_csv: trailing characters in '" + field + "'");
            } catch (const IoError&) {
                throw;
            } catch (const std::exception&) {
                throw IoError("read_csv: cannot parse field '" + field + "' in " + path);
            }
            pos = next + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("read_csv: ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("read_csv: " + path + " is empty");

    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

}  // namespace emk
