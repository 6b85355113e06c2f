#pragma once

#include <stdexcept>
#include <string>

namespace risce {

/// Operand shapes are incompatible for the requested operation.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A pseudoinverse was requested for a matrix that is rank deficient at the
/// configured tolerance.
class SingularityError : public std::runtime_error {
public:
    SingularityError(const std::string& what, long rows, long cols)
        : std::runtime_error(what), rows_(rows), cols_(cols) {}

    long rows() const noexcept { return rows_; }
    long cols() const noexcept { return cols_; }

private:
    long rows_;
    long cols_;
};

/// Invalid scenario, estimator or experiment configuration. `field()` names the
/// offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace risce
