#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace disslab {

// every CSV starts with this line, then the column names
inline constexpr const char* kCsvHeader = "# disslab-csv v1";

std::string fmt17(double x);

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);

private:
    std::ostream& os_;
    std::size_t ncol_;
};

// "lo:hi:n", n log-spaced points from lo to hi inclusive
std::vector<double> parse_nu_grid(const std::string& spec);

// writes text to path, or to stdout when path is "-"
void write_text(const std::string& path, const std::string& text);

} // namespace disslab
