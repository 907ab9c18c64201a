#pragma once

#include <stdexcept>
#include <string>

namespace ccw {

/// Base class of every domain error raised by the workbench.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChartMismatch : public Error {
public:
    using Error::Error;
};

class DenominatorVanishes : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class InconsistentSystem : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};


/// Handle-calculus move whose preconditions fail.
class HandleMoveError : public Error {
public:
    HandleMoveError(std::string code, const std::string& what) : Error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

}  // namespace ccw
