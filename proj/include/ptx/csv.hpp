#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <string_view>

namespace ptx::csv {

// Shortest decimal text that round-trips to the same double.
std::string number(double x);

// "re+imi" / "re-imi", each part formatted with number().
std::string complex_number(std::complex<double> z);

std::string join(std::initializer_list<std::string_view> fields);

}  // namespace ptx::csv
