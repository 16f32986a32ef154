#include <cmath>
#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ssclab/cli.hpp"

namespace ssclab::cli {

namespace {

void write_float(std::ostringstream& os, double v) {
    if (!std::isfinite(v)) {
        os << "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Keep floats recognisable as floats on reparse.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    os << s;
}

void write(std::ostringstream& os, const json& j, int indent, int depth) {
    const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* sep = indent > 0 ? ": " : ":";
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',';
                first = false;
                os << pad << json(it.key()).dump() << sep;
                write(os, it.value(), indent, depth + 1);
            }
            os << close << '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Numeric arrays stay on one line.
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            os << '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) os << (flat && indent > 0 ? ", " : ",");
                first = false;
                if (!flat) os << pad;
                write(os, e, indent, depth + 1);
            }
            if (!flat) os << close;
            os << ']';
            return;
        }
        case json::value_t::number_float:
            write_float(os, j.get<double>());
            return;
        default:
            os << j.dump();
    }
}

}  // namespace

std::string dump(const json& j, int indent) {
    std::ostringstream os;
    write(os, j, indent, 0);
    return os.str();
}

}  // namespace ssclab::cli
