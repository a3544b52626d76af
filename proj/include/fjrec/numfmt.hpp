#pragma once

#include <string>

namespace fjrec {

// Locale-independent decimal with 17 significant digits (round-trips every double).
std::string format_double(double v);

}  // namespace fjrec
