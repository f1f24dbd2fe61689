#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace docground {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

// Bad record in a JSONL corpus or a malformed config/template file.
// line is 1-based; 0 means the error is not tied to a specific line.
struct SchemaError : Error {
    std::size_t line = 0;
    std::string path;

    SchemaError(std::size_t line_, std::string path_, const std::string& msg)
        : Error(format(line_, path_, msg)), line(line_), path(std::move(path_)) {}

    static std::string format(std::size_t line, const std::string& path, const std::string& msg) {
        std::string s;
        if (line > 0) s += "line " + std::to_string(line) + ": ";
        if (!path.empty()) s += path + ": ";
        s += msg;
        return s;
    }
};

} // namespace docground
