#include "quench/alert.hpp"

namespace quench {

std::optional<std::uint32_t> parse_ipv4(std::string_view s) {
    std::uint32_t addr = 0;
    int octets = 0;
    std::size_t i = 0;
    while (i <= s.size()) {
        std::size_t start = i;
        std::uint32_t value = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            value = value * 10 + static_cast<std::uint32_t>(s[i] - '0');
            if (value > 255)
                return std::nullopt;
            ++i;
        }
        const std::size_t len = i - start;
        if (len == 0 || len > 3)
            return std::nullopt;
        if (len > 1 && s[start] == '0') // no leading zeros ("01.2.3.4")
            return std::nullopt;
        addr = (addr << 8) | value;
        ++octets;
        if (i == s.size())
            break;
        if (s[i] != '.' || octets == 4)
            return std::nullopt;
        ++i;
    }
    if (octets != 4)
        return std::nullopt;
    return addr;
}

bool is_valid_ipv4(std::string_view s) {
    return parse_ipv4(s).has_value();
}

std::string ipv4_to_string(std::uint32_t addr) {
    std::string out;
    out.reserve(15);
    for (int shift = 24; shift >= 0; shift -= 8) {
        out += std::to_string((addr >> shift) & 0xffu);
        if (shift != 0)
            out += '.';
    }
    return out;
}

} // namespace quench
