#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coolmom::bench {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws if absent.
    std::size_t column(const std::string& name) const;
};

/// Plain comma-separated reader: no quoting, every row as wide as the header.
CsvTable read_csv(std::istream& in);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace coolmom::bench
