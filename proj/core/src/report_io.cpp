#include "latentgp/report_io.hpp"

#include <fstream>

#include "latentgp/errors.hpp"
#include "latentgp/text.hpp"

namespace latentgp {

std::string csv_escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw DataError("cannot open '" + file.string() + "' for writing");

    auto emit = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i)
                out << ',';
            out << csv_escape(fields[i]);
        }
        out << "\r\n";
    };

    emit(header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw ShapeError("csv row has " + format_int(static_cast<long long>(row.size())) +
                             " fields, header has " +
                             format_int(static_cast<long long>(header.size())));
        emit(row);
    }
}

}  // namespace latentgp
