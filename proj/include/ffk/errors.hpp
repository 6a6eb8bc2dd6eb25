#pragma once

#include <stdexcept>
#include <string>

namespace ffk {

// Malformed textual input (grammar violation).  CLI exit code 2.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical precondition of an operation does not hold.  CLI exit code 3.
class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// Parameters outside the supported range (q too large, even characteristic, ...).
// CLI exit code 4.
class unsupported_error : public std::runtime_error {
public:
    explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ffk
