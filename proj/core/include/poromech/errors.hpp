#pragma once

#include <stdexcept>
#include <string>

namespace poromech {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonPositiveJacobian : public Error {
public:
    explicit NonPositiveJacobian(double J, std::string where = {})
        : Error("non-positive Jacobian J=" + std::to_string(J) + (where.empty() ? "" : " at " + where)),
          jacobian(J) {}
    double jacobian;
};

class DegeneratePhase : public Error {
public:
    using Error::Error;
};

class OutOfRangeDensity : public Error {
public:
    using Error::Error;
};

class ClosureNoConvergence : public Error {
public:
    using Error::Error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class UnknownBoundaryTag : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class NewtonDiverged : public Error {
public:
    NewtonDiverged(const std::string& msg, double last_norm) : Error(msg), residual_norm(last_norm) {}
    double residual_norm;
};

class InvalidTimeStep : public Error {
public:
    using Error::Error;
};

class RootBracketFailure : public Error {
public:
    using Error::Error;
};

class EmptyField : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line_no, const std::string& msg)
        : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    int line;
};

class ValidationError : public Error {
public:
    ValidationError(std::string field_name, const std::string& msg)
        : Error(field_name + ": " + msg), field(std::move(field_name)) {}
    std::string field;
};

class IoError : public Error {
public:
    using Error::Error;
};

class EmptySeries : public Error {
public:
    using Error::Error;
};

/// A solver error raised while running a scenario, with the scenario and time prepended.
class ScenarioError : public Error {
public:
    using Error::Error;
};

}  // namespace poromech
