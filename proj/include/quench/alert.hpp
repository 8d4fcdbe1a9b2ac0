#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "quench/time.hpp"

namespace quench {

// One structured IDS detection event. Ids are assigned monotonically by
// whichever component introduces the alert into a stream (reader or generator).
struct Alert {
    std::int64_t id = 0;
    std::string signature;
    std::string src; // dotted-quad IPv4
    std::string dst; // dotted-quad IPv4
    Micros ts = 0;
    std::map<std::string, std::string> attrs;
};

std::optional<std::uint32_t> parse_ipv4(std::string_view s);
bool is_valid_ipv4(std::string_view s);
std::string ipv4_to_string(std::uint32_t addr);

} // namespace quench
