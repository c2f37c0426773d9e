// Reproducible text formatting shared by the CSV emitters.
#pragma once

#include <complex>
#include <string>

namespace nvs {

// Shortest representation with 17 significant digits (round-trips doubles).
std::string fmt17(double x);

// "re,im" pair with fmt17 components.
std::string fmt17(std::complex<double> z);

}  // namespace nvs
