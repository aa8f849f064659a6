#pragma once

#include <string>
#include <vector>

namespace epchiral {

// Shortest round-trip decimal form, '.'-decimal, up to 17 significant
// digits; locale-independent.
std::string format_double(double v);

// RFC-4180: quote when the field holds a comma, quote, or newline.
std::string csv_escape(const std::string& field);

std::string csv_line(const std::vector<std::string>& fields);

// Writes header + rows with '\n' line ends.  Throws std::runtime_error with
// the path in the message on I/O failure.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

void write_text(const std::string& path, const std::string& content);

}  // namespace epchiral
