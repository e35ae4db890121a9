#include "unisphere/core/csv.hpp"

#include "unisphere/errors.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <string_view>
#include <vector>

namespace unisphere {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<std::vector<double>> parse_fields(std::string_view line) {
    std::vector<double> out;
    while (true) {
        const auto comma = line.find(',');
        const auto field = trim(line.substr(0, comma));
        double v = 0.0;
        const auto* end = field.data() + field.size();
        auto [ptr, ec] = std::from_chars(field.data(), end, v);
        if (field.empty() || ec != std::errc() || ptr != end) return std::nullopt;
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

UnitPointSet read_point_csv(std::istream& in, bool normalize) {
    std::vector<double> raw;
    std::size_t p = 0;
    std::size_t n = 0;
    std::size_t line_no = 0;
    std::string line;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = parse_fields(line);
        if (!fields) {
            if (first_content) {
                first_content = false;
                continue;
            }
            throw ParseError("line " + std::to_string(line_no) + ": non-numeric field");
        }
        first_content = false;
        if (p == 0) p = fields->size();
        if (fields->size() != p) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(p) + " fields, got " + std::to_string(fields->size()));
        }
        raw.insert(raw.end(), fields->begin(), fields->end());
        ++n;
    }
    return make_unit_point_set(std::move(raw), n, p, normalize);
}

UnitPointSet read_point_csv_file(const std::string& path, bool normalize) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_point_csv(in, normalize);
}

}  // namespace unisphere
