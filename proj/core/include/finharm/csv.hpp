#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace finharm::csv {

/// Shortest round-trip decimal form of x ("%.17g"), "inf"/"-inf"/"nan" for non-finite values.
std::string number(double x);
std::string number(std::int64_t x);

/// Quotes a field when it contains a comma, quote or newline.
std::string field(std::string_view s);

/// Joins already formatted fields with commas.
std::string row(const std::vector<std::string>& fields);

/// Splits one CSV line (no embedded newlines) honouring double quotes.
std::vector<std::string> split(std::string_view line);

}  // namespace finharm::csv
