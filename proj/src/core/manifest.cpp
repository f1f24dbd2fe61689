#include "core/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/version.hpp"

namespace docground {

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        h = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
        if (!in) break;
    }
    char out[32];
    std::snprintf(out, sizeof out, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return out;
}

void RunManifest::write_beside(const std::string& primary_output) const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["tool_version"] = kVersion;
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char ts[32];
    std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["timestamp"] = ts;
    j["config"] = config;
    j["inputs"] = nlohmann::ordered_json::array();
    for (const auto& [name, path] : inputs) {
        j["inputs"].push_back({{"name", name}, {"path", path}, {"digest", digest_file(path)}});
    }
    j["outputs"] = outputs;

    std::string path = primary_output + ".manifest.json";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

} // namespace docground
