#include "cycleflow/matpower.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "cycleflow/errors.hpp"

namespace cycleflow {
namespace {

struct Row {
    std::vector<double> values;
    int line;  // 1-based source line
};

// Collect the numeric rows of `mpc.<table> = [ ... ];`. Rows are terminated
// by ';' or a newline; '%' starts a comment.
std::vector<Row> extract_table(const std::vector<std::string>& lines,
                               const std::string& table_name) {
    std::vector<Row> rows;
    bool in_table = false;
    Row current;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string text = lines[i];
        if (auto pos = text.find('%'); pos != std::string::npos) text.erase(pos);

        std::size_t start = 0;
        if (!in_table) {
            auto pos = text.find(table_name);
            if (pos == std::string::npos) continue;
            // Reject prefix matches such as mpc.bus_name for mpc.bus.
            if (pos + table_name.size() < text.size()) {
                char next = text[pos + table_name.size()];
                if (std::isalnum(static_cast<unsigned char>(next)) || next == '_') continue;
            }
            auto eq = text.find('=', pos + table_name.size());
            if (eq == std::string::npos) continue;
            auto bracket = text.find('[', eq);
            if (bracket == std::string::npos) {
                throw ParseError("expected '[' after " + table_name,
                                 static_cast<int>(i + 1));
            }
            in_table = true;
            start = bracket + 1;
            current = Row{{}, static_cast<int>(i + 1)};
        }

        for (std::size_t p = start; p < text.size() && in_table;) {
            char c = text[p];
            if (c == ']') {
                if (!current.values.empty()) rows.push_back(current);
                return rows;
            }
            if (c == ';') {
                if (!current.values.empty()) rows.push_back(current);
                current = Row{{}, static_cast<int>(i + 1)};
                ++p;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
                ++p;
                continue;
            }
            std::size_t end = p;
            while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) &&
                   text[end] != ';' && text[end] != ']' && text[end] != ',') {
                ++end;
            }
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(text.data() + p, text.data() + end, value);
            if (ec != std::errc() || ptr != text.data() + end) {
                throw ParseError("malformed numeric token '" + text.substr(p, end - p) +
                                     "' in " + table_name,
                                 static_cast<int>(i + 1));
            }
            if (current.values.empty()) current.line = static_cast<int>(i + 1);
            current.values.push_back(value);
            p = end;
        }
        if (in_table && !current.values.empty()) {
            // Newline also ends a row when the trailing ';' is missing.
            rows.push_back(current);
            current = Row{{}, static_cast<int>(i + 2)};
        }
    }
    if (in_table) throw ParseError("unterminated " + table_name + " table");
    throw ParseError("missing " + table_name + " table");
}

int as_bus_id(double v, int line) {
    int id = static_cast<int>(v);
    if (static_cast<double>(id) != v) {
        throw ParseError("bus number must be an integer, got " + std::to_string(v), line);
    }
    return id;
}

std::string case_name(const std::vector<std::string>& lines) {
    for (const std::string& text : lines) {
        auto pos = text.find("function");
        if (pos == std::string::npos) continue;
        auto eq = text.find('=', pos);
        if (eq == std::string::npos) continue;
        std::string tail = text.substr(eq + 1);
        std::string name;
        for (char c : tail) {
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                name += c;
            } else if (!name.empty()) {
                break;
            }
        }
        if (!name.empty()) return name;
    }
    return "matpower-case";
}

}  // namespace

Grid parse_matpower_case(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream stream(text);
        std::string line;
        while (std::getline(stream, line)) lines.push_back(line);
    }

    const auto bus_rows = extract_table(lines, "mpc.bus");
    const auto branch_rows = extract_table(lines, "mpc.branch");

    std::vector<Bus> buses;
    std::unordered_map<int, int> index_by_id;
    std::optional<int> reference;
    for (const Row& row : bus_rows) {
        if (row.values.size() < 2) {
            throw ParseError("bus row needs at least bus number and type", row.line);
        }
        const int id = as_bus_id(row.values[0], row.line);
        const int type = as_bus_id(row.values[1], row.line);
        if (!index_by_id.emplace(id, static_cast<int>(buses.size())).second) {
            throw ParseError("duplicate bus number " + std::to_string(id), row.line);
        }
        buses.push_back(Bus{id});
        if (type == 3 && !reference) reference = static_cast<int>(buses.size()) - 1;
    }
    if (buses.empty()) throw ParseError("empty mpc.bus table");

    std::vector<Branch> branches;
    for (const Row& row : branch_rows) {
        if (row.values.size() < 4) {
            throw ParseError("branch row needs at least fbus, tbus, r, x", row.line);
        }
        const int status =
            row.values.size() >= 11 ? static_cast<int>(row.values[10]) : 1;
        if (status == 0) continue;

        const int from = as_bus_id(row.values[0], row.line);
        const int to = as_bus_id(row.values[1], row.line);
        const double x = row.values[3];
        const double angle = row.values.size() >= 10 ? row.values[9] : 0.0;

        auto from_it = index_by_id.find(from);
        auto to_it = index_by_id.find(to);
        if (from_it == index_by_id.end() || to_it == index_by_id.end()) {
            throw ParseError("branch references unknown bus " +
                                 std::to_string(from_it == index_by_id.end() ? from : to),
                             row.line);
        }
        if (from == to) {
            throw ValidationError("unsupported branch (line " + std::to_string(row.line) +
                                  "): self-loop at bus " + std::to_string(from));
        }
        if (angle != 0.0) {
            throw ValidationError("unsupported branch (line " + std::to_string(row.line) +
                                  "): phase shifter " + std::to_string(from) + "-" +
                                  std::to_string(to));
        }
        if (!(x > 0.0)) {
            throw ValidationError("unsupported branch (line " + std::to_string(row.line) +
                                  "): in-service branch " + std::to_string(from) + "-" +
                                  std::to_string(to) + " with non-positive reactance");
        }
        branches.push_back(branch_from_reactance(from_it->second, to_it->second, x));
    }

    int slack;
    if (reference) {
        slack = *reference;
    } else {
        slack = 0;
        for (int i = 1; i < static_cast<int>(buses.size()); ++i) {
            if (buses[i].id < buses[slack].id) slack = i;
        }
    }
    return Grid(case_name(lines), std::move(buses), std::move(branches), slack);
}

}  // namespace cycleflow
