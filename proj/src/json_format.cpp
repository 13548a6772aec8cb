#include "crowdctl/json_format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace crowdctl {

namespace {

using json = nlohmann::ordered_json;

bool is_scalar(const json& v) { return !v.is_array() && !v.is_object(); }

void write_number(std::string& out, double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("format_json: non-finite number");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out += buf;
}

void write(std::string& out, const json& v, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close_pad(2 * depth, ' ');
    switch (v.type()) {
    case json::value_t::number_float:
        write_number(out, v.get<double>());
        return;
    case json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, item] : v.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + json(key).dump() + ": ";
            write(out, item, depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    case json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        const bool flat = std::all_of(v.begin(), v.end(), is_scalar);
        out += flat ? "[" : "[\n";
        bool first = true;
        for (const auto& item : v) {
            if (!first) out += flat ? ", " : ",\n";
            first = false;
            if (!flat) out += pad;
            write(out, item, depth + 1);
        }
        out += flat ? "]" : "\n" + close_pad + "]";
        return;
    }
    default:
        out += v.dump();
        return;
    }
}

} // namespace

std::string format_json(const nlohmann::ordered_json& doc) {
    std::string out;
    write(out, doc, 0);
    out += '\n';
    return out;
}

nlohmann::ordered_json json_real(double value) {
    if (value == std::numeric_limits<double>::infinity()) return "+inf";
    if (value == -std::numeric_limits<double>::infinity()) return "-inf";
    return value;
}

double real_from_json(const nlohmann::ordered_json& value) {
    if (value.is_string()) {
        const auto& s = value.get_ref<const std::string&>();
        if (s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument("not a real: " + s);
    }
    return value.get<double>();
}

} // namespace crowdctl
