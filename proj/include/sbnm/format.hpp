// format.hpp: Fixed float formatting used by every CSV and metadata writer

#pragma once

#include <string>

namespace sbnm {

// Scientific notation, 9 significant digits, '.' separator: "1.00000000e+00".
std::string format_double(double value);

} // namespace sbnm
