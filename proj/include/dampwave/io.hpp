#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dampwave {

/// Shortest decimal text that round-trips to the same double.
[[nodiscard]] std::string format_double(double x);

/// Strict parse of a full field; throws FileFormat.
[[nodiscard]] double parse_double(std::string_view field);

[[nodiscard]] std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

}  // namespace dampwave
