#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace docground {

// Every command that writes a primary output drops a sidecar manifest next to
// it (<output>.manifest.json): command name, tool version, timestamp, the
// effective config, input digests, and the output list. Enough to re-run or
// audit a pipeline step.
struct RunManifest {
    std::string command;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, std::string>> inputs; // (name, path)
    std::vector<std::string> outputs;

    void write_beside(const std::string& primary_output) const;
};

// FNV-1a over the file bytes, hex. Fast fingerprint for change detection,
// not a cryptographic digest.
std::string digest_file(const std::string& path);

} // namespace docground
