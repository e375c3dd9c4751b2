#pragma once

// Shared helpers for the unit suites: scratch directories, warning capture,
// fixture paths.

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "slampoint/common.hpp"

#ifndef SLAMPOINT_TEST_DATA_DIR
#define SLAMPOINT_TEST_DATA_DIR "tests/data"
#endif

namespace slampoint::testsupport {

inline std::string fixture_path(const std::string& name) {
    return std::string(SLAMPOINT_TEST_DATA_DIR) + "/" + name;
}

// Unique scratch directory, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag = "scratch") {
        static std::uint64_t counter = 0;
        auto base = std::filesystem::temp_directory_path();
        path_ = base / ("slampoint-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str() const { return path_.string(); }
    std::string path() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

// Collects warnings for the duration of a scope.
class WarnCapture {
  public:
    WarnCapture() : previous_(warn_sink()) {
        warn_sink() = [this](const std::string& msg) { messages.push_back(msg); };
    }
    ~WarnCapture() { warn_sink() = previous_; }
    WarnCapture(const WarnCapture&) = delete;
    WarnCapture& operator=(const WarnCapture&) = delete;

    bool any_contains(const std::string& needle) const {
        for (const auto& m : messages)
            if (m.find(needle) != std::string::npos) return true;
        return false;
    }

    std::vector<std::string> messages;

  private:
    WarnSink previous_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace slampoint::testsupport
