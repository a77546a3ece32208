#pragma once

// Runs the schauder CLI in a subprocess and captures stdout.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace cli {

struct Result {
    int status = -1;
    std::string out;
};

inline std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "schauder_cli_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

inline Result run(const std::string& args) {
    const auto out_path = scratch_dir() / "stdout.txt";
    const std::string cmd = std::string("'") + SCHAUDER_CLI_PATH + "' " + args + " > '" + out_path.string() +
                            "' 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    Result r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace cli
