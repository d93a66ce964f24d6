#include "dampwave/io.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "dampwave/error.hpp"

namespace dampwave {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view field) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
        field.remove_suffix(1);
    }
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double x = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
    if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw Error(ErrorCode::FileFormat, "not a number: '" + std::string(field) + "'");
    }
    return x;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace dampwave
