#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ssclab/serialize.hpp"

namespace ssclab::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& p);

class RunManifest {
public:
    RunManifest(std::string command, json config, std::uint64_t seed);

    void add_input(const std::filesystem::path& p);
    void add_output(const std::filesystem::path& p);
    void add_payload(const std::string& name, const std::string& bytes);
    json to_json() const;
    /// Logs to `err`; also writes <dir>/manifest.json when `dir` is non-empty.
    void emit(std::ostream& err, const std::filesystem::path& dir) const;

private:
    std::string command_;
    json config_;
    std::uint64_t seed_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::pair<std::string, std::string>> inputs_, outputs_;
};

}  // namespace ssclab::cli
