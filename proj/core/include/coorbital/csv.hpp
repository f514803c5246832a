#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace coorbital {

// Shortest form that round-trips: 17 significant digits.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);
    void row(std::initializer_list<double> values);

private:
    std::ostream& out_;
    std::size_t columns_;
};

}  // namespace coorbital
