#ifndef ELW_IO_HPP
#define ELW_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "elw/linalg.hpp"

namespace elw {

struct CsvTable {
    std::vector<std::string> header;
    Mat values;
};

// Numeric CSV with one header row, one observation per line, '.'-decimal
// floats. Ragged rows or unparsable fields throw std::invalid_argument.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace elw

#endif
