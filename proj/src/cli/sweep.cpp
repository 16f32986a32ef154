#include <algorithm>
#include <fstream>
#include <sstream>

#include "commands.hpp"

namespace ssclab::cli {

namespace fs = std::filesystem;

namespace {

struct Axis {
    std::string name;
    std::vector<json> values;
};

std::vector<json> axis_values(const json& v, const std::string& name) {
    if (v.is_array()) return {v.begin(), v.end()};
    if (v.is_object() && v.contains("from") && v.contains("to")) {
        const long from = v["from"].get<long>(), to = v["to"].get<long>();
        const long step = v.value("step", 1L);
        if (step <= 0) throw ValidationError("grid step must be positive", "$.grid." + name + ".step");
        std::vector<json> out;
        for (long x = from; x <= to; x += step) out.emplace_back(x);
        return out;
    }
    throw ValidationError("grid values must be a list or {from, to[, step]}", "$.grid." + name);
}

std::vector<Axis> parse_grid(const json& g) {
    std::vector<Axis> axes;
    if (g.is_array()) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::string path = "$.grid[" + std::to_string(i) + "]";
            if (!g[i].contains("param") || !g[i].contains("values")) throw ValidationError("grid entries need param and values", path);
            const std::string name = g[i]["param"].get<std::string>();
            axes.push_back({name, axis_values(g[i]["values"], name)});
        }
    } else if (g.is_object()) {
        for (auto it = g.begin(); it != g.end(); ++it) axes.push_back({it.key(), axis_values(it.value(), it.key())});
    } else {
        throw ValidationError("grid must be a list or an object", "$.grid");
    }
    if (axes.empty()) throw ValidationError("grid is empty", "$.grid");
    if (axes.size() > 2) throw ValidationError("a sweep takes one or two parameters", "$.grid");
    for (const auto& a : axes) {
        if (a.values.empty()) throw ValidationError("grid parameter '" + a.name + "' has no values", "$.grid." + a.name);
    }
    return axes;
}

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return dump(v, -1);
}

std::string substitute(std::string token, const std::vector<std::pair<std::string, std::string>>& point) {
    for (const auto& [name, value] : point) {
        const std::string key = "{" + name + "}";
        for (std::size_t pos = token.find(key); pos != std::string::npos; pos = token.find(key, pos + value.size())) {
            token.replace(pos, key.size(), value);
        }
    }
    return token;
}

// Dotted lookup: "worst.lhs".
const json* lookup(const json& j, const std::string& path) {
    const json* cur = &j;
    std::istringstream is(path);
    std::string part;
    while (std::getline(is, part, '.')) {
        if (!cur->is_object() || !cur->contains(part)) return nullptr;
        cur = &(*cur)[part];
    }
    return cur;
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

json run_sweep(Context& ctx, const std::string& spec_path) {
    const json spec = load_json_file(ctx, spec_path);
    if (!spec.is_object()) throw ValidationError("sweep spec must be an object", "$");
    if (!spec.contains("command") || !spec["command"].is_array() || spec["command"].empty()) {
        throw ValidationError("sweep spec needs a non-empty command token list", "$.command");
    }
    if (!spec.contains("grid")) throw ValidationError("sweep spec needs a grid", "$.grid");
    if (!spec.contains("columns") || !spec["columns"].is_array() || spec["columns"].empty()) {
        throw ValidationError("sweep spec needs a list of columns", "$.columns");
    }
    const auto axes = parse_grid(spec["grid"]);
    const auto tokens = spec["command"].get<std::vector<std::string>>();
    const auto columns = spec["columns"].get<std::vector<std::string>>();
    if (tokens.front() == "sweep") throw ValidationError("sweeps cannot nest", "$.command");

    const fs::path dir = ctx.g.out.empty() ? fs::path(".") : fs::path(ctx.g.out);
    fs::create_directories(dir);
    const fs::path csv_path = dir / spec.value("output", std::string("sweep.csv"));

    std::ostringstream csv;
    for (std::size_t c = 0; c < columns.size(); ++c) csv << (c ? "," : "") << csv_field(columns[c]);
    csv << ",status\n";

    const std::size_t n0 = axes[0].values.size();
    const std::size_t n1 = axes.size() > 1 ? axes[1].values.size() : 1;
    std::size_t failures = 0;
    // Per value of the first axis: numeric column samples for the trend summary.
    std::vector<std::vector<std::vector<double>>> samples(n0, std::vector<std::vector<double>>(columns.size()));

    for (std::size_t i = 0; i < n0; ++i) {
        for (std::size_t k = 0; k < n1; ++k) {
            std::vector<std::pair<std::string, std::string>> point{{axes[0].name, scalar_text(axes[0].values[i])}};
            if (axes.size() > 1) point.emplace_back(axes[1].name, scalar_text(axes[1].values[k]));
            std::vector<std::string> argv;
            for (const auto& t : tokens) argv.push_back(substitute(t, point));

            std::ostringstream out, err;
            const int code = run(argv, out, err);
            json result;
            try {
                result = json::parse(out.str());
            } catch (const json::parse_error&) {
                result = json::object();
            }
            std::string status = "ok";
            if (code != 0) {
                ++failures;
                status = "error " + std::to_string(code);
                if (const json* m = lookup(result, "error.message")) status += ": " + m->get<std::string>();
            }
            for (std::size_t c = 0; c < columns.size(); ++c) {
                std::string text;
                auto axis = std::find_if(point.begin(), point.end(), [&](const auto& p) { return p.first == columns[c]; });
                if (axis != point.end()) {
                    text = axis->second;
                } else if (const json* v = code == 0 ? lookup(result, columns[c]) : nullptr) {
                    text = scalar_text(*v);
                    if (v->is_number()) samples[i][c].push_back(v->get<double>());
                }
                csv << (c ? "," : "") << csv_field(text);
            }
            csv << ',' << csv_field(status) << '\n';
        }
    }

    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + csv_path.string() + "'", "$.output");
    f << csv.str();
    f.close();
    ctx.outputs.push_back(csv_path);

    json summary = json::object();
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] == axes[0].name || (axes.size() > 1 && columns[c] == axes[1].name)) continue;
        json medians = json::array();
        std::vector<double> m;
        for (std::size_t i = 0; i < n0; ++i) {
            if (samples[i][c].empty()) {
                medians.push_back(nullptr);
                continue;
            }
            m.push_back(median(samples[i][c]));
            medians.push_back(m.back());
        }
        if (m.empty()) continue;
        bool up = true, down = true;
        for (std::size_t i = 1; i < m.size(); ++i) {
            up = up && m[i] >= m[i - 1];
            down = down && m[i] <= m[i - 1];
        }
        summary[columns[c]] = {{"median_by_" + axes[0].name, medians},
                               {"trend", up && down ? "flat" : up ? "nondecreasing" : down ? "nonincreasing" : "mixed"}};
    }
    json axes_json = json::array();
    for (const auto& a : axes) axes_json.push_back({{"param", a.name}, {"values", a.values}});
    return {{"rows", n0 * n1}, {"failures", failures}, {"csv", csv_path.string()}, {"grid", axes_json}, {"summary", summary}};
}

}  // namespace ssclab::cli
