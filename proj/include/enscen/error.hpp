#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace enscen {

/// Runtime failure tagged with the subsystem that raised it, so the CLI can
/// surface "module=... msg=..." on one line.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

}  // namespace enscen
