#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "manifest.hpp"
#include "ssclab/cli.hpp"

namespace ssclab::cli {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw ConsistencyError("SHA-256 digest failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::string sha256_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + p.string() + "'", p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

RunManifest::RunManifest(std::string command, json config, std::uint64_t seed)
    : command_(std::move(command)), config_(std::move(config)), seed_(seed), start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const std::filesystem::path& p) { inputs_.emplace_back(p.string(), sha256_file(p)); }

void RunManifest::add_output(const std::filesystem::path& p) { outputs_.emplace_back(p.string(), sha256_file(p)); }

void RunManifest::add_payload(const std::string& name, const std::string& bytes) {
    outputs_.emplace_back(name, sha256_hex(bytes));
}

json RunManifest::to_json() const {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json in = json::object(), out = json::object();
    for (const auto& [k, v] : inputs_) in[k] = v;
    for (const auto& [k, v] : outputs_) out[k] = v;
    return {{"command", command_}, {"config", config_},  {"seed", seed_},  {"version", kVersion},
            {"wall_time_s", wall}, {"inputs", in},       {"outputs", out}};
}

void RunManifest::emit(std::ostream& err, const std::filesystem::path& dir) const {
    const std::string text = dump(to_json(), -1);
    err << "manifest " << text << '\n';
    if (!dir.empty()) {
        std::ofstream f(dir / "manifest.json", std::ios::binary);
        if (!f) throw ValidationError("cannot write manifest into '" + dir.string() + "'", "--out");
        f << dump(to_json()) << '\n';
    }
}

}  // namespace ssclab::cli
