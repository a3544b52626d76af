#include "fjrec/numfmt.hpp"

#include <array>
#include <charconv>

namespace fjrec {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

}  // namespace fjrec
