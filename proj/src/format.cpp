#include "nvs/format.hpp"

#include <cstdio>

namespace nvs {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt17(std::complex<double> z) {
  return fmt17(z.real()) + "," + fmt17(z.imag());
}

}  // namespace nvs
