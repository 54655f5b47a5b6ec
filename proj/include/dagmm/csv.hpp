#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dagmm::csv {

using Row = std::vector<std::string>;

/// RFC 4180 records: quoted fields may hold commas, quotes ("") and newlines.
/// Accepts LF or CRLF line ends; a trailing newline does not add a record.
std::vector<Row> parse(std::string_view text);

/// Quotes the field only when it needs it.
std::string escape(std::string_view field);
std::string join(const Row& fields);

}  // namespace dagmm::csv
