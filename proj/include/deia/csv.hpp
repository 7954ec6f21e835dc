#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace deia::csv {

// RFC-4180 record reader: handles quoted fields with embedded commas,
// doubled quotes, and newlines. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields);

std::string escape(std::string_view field);

void write_record(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace deia::csv
