#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "manifest.hpp"
#include "ssclab/cli.hpp"

namespace ssclab::cli {

struct Globals {
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::string out;
    std::string format = "json";
};

// Per-run bookkeeping shared by the handlers.
struct Context {
    Globals g;
    std::vector<std::filesystem::path> inputs;
    std::vector<std::filesystem::path> outputs;
};

json load_json_file(Context& ctx, const std::string& path);

/// Expands the spec's grid, runs each point in-process and writes the CSV.
json run_sweep(Context& ctx, const std::string& spec_path);

}  // namespace ssclab::cli
