#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace plap::cli {

// Insertion-ordered so reports serialize in a fixed key order.
using Json = nlohmann::ordered_json;

// Pretty-printed JSON with every double written as %.17g; non-finite
// doubles become null.
std::string dump_json(const Json& j);

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    template <class... Cells>
    void add(const Cells&... cells) {
        rows.push_back({cell(cells)...});
    }

    static std::string cell(double v);
    static std::string cell(int v);
    static std::string cell(long v);
    static std::string cell(std::size_t v);
    static std::string cell(const std::string& v);
    static std::string cell(const char* v) { return cell(std::string(v)); }
    static std::string cell(bool v) { return v ? "true" : "false"; }
};

// RFC 4180 quoting for cells with commas, quotes or newlines.
std::string to_csv(const Table& t);

}  // namespace plap::cli
