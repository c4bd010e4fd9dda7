#ifndef SPLITQUAT_ERRORS_HPP
#define SPLITQUAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sq {

struct SingularElement : std::runtime_error {
    explicit SingularElement(const std::string& msg) : std::runtime_error(msg) {}
};

struct StencilOutsideDomain : std::runtime_error {
    explicit StencilOutsideDomain(const std::string& msg) : std::runtime_error(msg) {}
};

struct IntegrandSingular : std::runtime_error {
    explicit IntegrandSingular(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateFrame : std::runtime_error {
    explicit DegenerateFrame(const std::string& msg) : std::runtime_error(msg) {}
};

struct WindowTooWide : std::runtime_error {
    explicit WindowTooWide(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonConvergent : std::runtime_error {
    explicit NonConvergent(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sq

#endif
