#include "coorbital/csv.hpp"

#include "coorbital/errors.hpp"

#include <cstdio>

namespace coorbital {

std::string format_double(double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(out), columns_(header.size()) {
    bool first = true;
    for (auto h : header) {
        if (!first) out_ << ',';
        out_ << h;
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
    if (values.size() != columns_) throw DomainError("csv row width does not match the header");
    bool first = true;
    for (double v : values) {
        if (!first) out_ << ',';
        out_ << format_double(v);
        first = false;
    }
    out_ << '\n';
}

}  // namespace coorbital
