#include "disslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "disslab/error.hpp"

namespace disslab {

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& columns) : os_(os), ncol_(columns.size())
{
    os_ << kCsvHeader << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values)
{
    if (values.size() != ncol_) throw ValidationError("csv row has the wrong number of columns");
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << fmt17(values[i]);
    os_ << "\n";
}

std::vector<double> parse_nu_grid(const std::string& spec)
{
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw ValidationError("nu grid must look like lo:hi:points, got '" + spec + "'");
    double lo, hi;
    long n;
    try {
        std::size_t p1, p2, p3;
        lo = std::stod(parts[0], &p1);
        hi = std::stod(parts[1], &p2);
        n = std::stol(parts[2], &p3);
        if (p1 != parts[0].size() || p2 != parts[1].size() || p3 != parts[2].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw ValidationError("nu grid must look like lo:hi:points, got '" + spec + "'");
    }
    if (n < 1) throw ValidationError("nu grid is empty");
    if (!(lo > 0) || !(hi > 0)) throw ValidationError("nu grid bounds must be positive");
    if (n == 1) {
        if (lo != hi) throw ValidationError("a one-point nu grid needs lo == hi");
        return {lo};
    }
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (long i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

void write_text(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

} // namespace disslab
