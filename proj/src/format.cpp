// format.cpp

#include "sbnm/format.hpp"

#include <fmt/format.h>

namespace sbnm {

std::string format_double(double value) {
    if (value == 0.0) value = 0.0;  // no "-0.00000000e+00"
    return fmt::format("{:.8e}", value);
}

} // namespace sbnm
