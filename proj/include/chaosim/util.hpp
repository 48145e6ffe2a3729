#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace chaosim {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 17 significant digits: round-trip exact for binary64.
inline std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

inline std::string format_real_sig(double value, int significant) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, value);
    return buf;
}

// Write-temp-then-rename so readers never observe a partial file and reruns
// replace outputs in one step.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place: " + path);
    }
}

} // namespace chaosim
