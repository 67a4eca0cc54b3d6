#pragma once

#include <stdexcept>
#include <string>

namespace gldpdq {

//! Argument outside the documented domain of an operation.
class DomainError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! Input data that cannot be used (missing column, too few values, ...).
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! A numeric routine produced a non-finite or otherwise unusable value.
class NumericError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! The sample carries no usable information for estimation.
class EstimationError : public NumericError
{
public:
  using NumericError::NumericError;
};

//! Sample quartiles coincide, so the scale is undefined.
class DegenerateSampleError : public EstimationError
{
public:
  using EstimationError::EstimationError;
};

} // namespace gldpdq
