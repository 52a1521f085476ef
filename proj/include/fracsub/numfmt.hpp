#pragma once

#include <charconv>
#include <string>
#include <string_view>

namespace fracsub {

/// Locale-independent decimal formatting with 17 significant digits,
/// enough to round-trip any IEEE double. All CSV output goes through here.
inline std::string format_g17(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

/// Parse a double without locale surprises. Returns false on trailing junk.
inline bool parse_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

} // namespace fracsub
