#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace latentgp {

// RFC 4180 CSV: CRLF record separators, fields quoted only when they
// contain a comma, quote, or newline. Numbers should be preformatted
// with format_double so repeated runs emit identical bytes.
void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string csv_escape(const std::string& field);

}  // namespace latentgp
