#pragma once

#include <stdexcept>
#include <string>

namespace qng {

/// Malformed input content (bad rows, bad config values). Maps to exit 1.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem-level failure (cannot open, short write). Maps to exit 2.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qng
