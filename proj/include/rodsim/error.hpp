#pragma once

#include <stdexcept>
#include <string>

namespace rodsim {

// All structured failures funnel through SimError so the CLI can map the
// kind onto a stable exit code.
enum class ErrorKind { Config, Runtime, Io };

class SimError : public std::runtime_error {
public:
    SimError(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    static SimError config(std::string msg) { return {ErrorKind::Config, std::move(msg)}; }
    static SimError runtime(std::string msg) { return {ErrorKind::Runtime, std::move(msg)}; }
    static SimError io(std::string msg) { return {ErrorKind::Io, std::move(msg)}; }

private:
    ErrorKind kind_;
};

} // namespace rodsim
