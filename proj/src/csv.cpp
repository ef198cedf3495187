#include "ptx/csv.hpp"

#include <fmt/format.h>

#include <cmath>

namespace ptx::csv {

std::string number(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  return fmt::format("{}", x);
}

std::string complex_number(std::complex<double> z) {
  const std::string im = number(z.imag());
  const bool signed_im = !im.empty() && (im.front() == '-' || im.front() == '+');
  return number(z.real()) + (signed_im ? "" : "+") + im + "i";
}

std::string join(std::initializer_list<std::string_view> fields) {
  std::string out;
  bool first = true;
  for (const auto field : fields) {
    if (!first) {
      out += ',';
    }
    out += field;
    first = false;
  }
  return out;
}

}  // namespace ptx::csv
