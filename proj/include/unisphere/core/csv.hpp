#pragma once

#include "unisphere/core/point_set.hpp"

#include <istream>
#include <string>

namespace unisphere {

/// Reads one observation per line, p comma-separated decimal fields.
/// A first line that does not parse as numbers is treated as a header.
/// Blank lines are skipped. Inconsistent column counts raise ParseError
/// naming the line; the result is validated by make_unit_point_set.
UnitPointSet read_point_csv(std::istream& in, bool normalize);
UnitPointSet read_point_csv_file(const std::string& path, bool normalize);

}  // namespace unisphere
