#include "elw/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace elw {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("read_csv: empty input");
    CsvTable t;
    for (auto& f : split_fields(line)) t.header.push_back(trim(f));
    const std::size_t cols = t.header.size();

    std::vector<double> flat;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != cols)
            throw std::invalid_argument("read_csv: ragged row at line " +
                                        std::to_string(rows + 2));
        for (const auto& f : fields) {
            const std::string v = trim(f);
            try {
                std::size_t used = 0;
                const double x = std::stod(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
                flat.push_back(x);
            } catch (const std::exception&) {
                throw std::invalid_argument("read_csv: bad number '" + v + "' at line " +
                                            std::to_string(rows + 2));
            }
        }
        ++rows;
    }
    t.values = Mat(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t.values(i, j) = flat[i * cols + j];
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("read_csv: cannot open " + path);
    return read_csv(in);
}

}  // namespace elw
