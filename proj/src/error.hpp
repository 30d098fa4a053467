#pragma once

#include <stdexcept>
#include <string>

namespace doors {

enum class errc {
    invalid_argument,
    validation_failed,
    parse_error,
    divergent,
    nonconvergent,
    horizon_exceeded,
    timeout,
    io_error,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline const char* errc_name(errc code) {
    switch (code) {
    case errc::invalid_argument: return "invalid_argument";
    case errc::validation_failed: return "validation_failed";
    case errc::parse_error: return "parse_error";
    case errc::divergent: return "divergent";
    case errc::nonconvergent: return "nonconvergent";
    case errc::horizon_exceeded: return "horizon_exceeded";
    case errc::timeout: return "timeout";
    case errc::io_error: return "io_error";
    }
    return "unknown";
}

}  // namespace doors
