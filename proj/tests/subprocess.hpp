// subprocess.hpp
// Minimal helper for driving the CLI binary from tests.

#pragma once

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <sys/wait.h>

namespace testutil {

struct RunResult {
    int exit_code;
    std::string output;  // captured stdout
};

inline RunResult run_command(const std::string& cmd) {
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (pipe == nullptr) throw std::runtime_error("popen failed: " + cmd);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return RunResult{code, out};
}

}  // namespace testutil
