#include "plap/cli/report.hpp"

#include <cmath>

#include "plap/cli/config.hpp"

namespace plap::cli {

namespace {

void write(const Json& j, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
    case Json::value_t::number_float: {
        const double v = j.get<double>();
        out += std::isfinite(v) ? format_double(v) : "null";
        break;
    }
    case Json::value_t::array:
        if (j.empty()) {
            out += "[]";
            break;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += pad;
            write(j[k], depth + 1, out);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "]";
        break;
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            break;
        }
        out += "{\n";
        std::size_t k = 0;
        for (const auto& [key, value] : j.items()) {
            out += pad + Json(key).dump() + ": ";
            write(value, depth + 1, out);
            out += ++k < j.size() ? ",\n" : "\n";
        }
        out += close + "}";
        break;
    }
    default:
        out += j.dump();
    }
}

}  // namespace

std::string dump_json(const Json& j) {
    std::string out;
    write(j, 0, out);
    out += '\n';
    return out;
}

std::string Table::cell(double v) { return format_double(v); }
std::string Table::cell(int v) { return std::to_string(v); }
std::string Table::cell(long v) { return std::to_string(v); }
std::string Table::cell(std::size_t v) { return std::to_string(v); }
std::string Table::cell(const std::string& v) { return v; }

std::string to_csv(const Table& t) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) {
            return s;
        }
        std::string q = "\"";
        for (char ch : s) {
            q += ch;
            if (ch == '"') {
                q += '"';
            }
        }
        return q + "\"";
    };
    auto line = [&](const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            out += (k > 0 ? "," : "") + quote(cells[k]);
        }
        return out + "\n";
    };
    std::string out = line(t.header);
    for (const auto& r : t.rows) {
        out += line(r);
    }
    return out;
}

}  // namespace plap::cli
