#include "report_format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qes::cli {

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0; // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.14e", value);
    return buf;
}

namespace {

void write_value(std::ostream& out, const Json& v, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
    case Json::value_t::object: {
        if (v.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) out << ",\n";
            first = false;
            out << inner << Json(it.key()).dump() << ": ";
            write_value(out, it.value(), indent + 1);
        }
        out << "\n" << pad << "}";
        return;
    }
    case Json::value_t::array: {
        // Arrays of scalars stay on one line; arrays of objects get one element per line.
        const bool flat = std::none_of(v.begin(), v.end(), [](const Json& e) { return e.is_structured(); });
        if (v.empty()) {
            out << "[]";
            return;
        }
        out << "[";
        bool first = true;
        for (const auto& e : v) {
            if (!first) out << (flat ? ", " : ",");
            first = false;
            if (!flat) out << "\n" << inner;
            write_value(out, e, indent + 1);
        }
        if (!flat) out << "\n" << pad;
        out << "]";
        return;
    }
    case Json::value_t::number_float: {
        const double d = v.get<double>();
        out << (std::isfinite(d) ? format_number(d) : "null");
        return;
    }
    default:
        out << v.dump();
        return;
    }
}

} // namespace

void write_json(std::ostream& out, const Json& doc)
{
    write_value(out, doc, 0);
    out << "\n";
}

} // namespace qes::cli
