#pragma once

#include <stdexcept>
#include <string>

namespace kfrontier {

//! Invalid arguments or inconsistent configuration supplied by the caller.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! Bandwidth h <= 0 (or not finite).
class InvalidBandwidth : public ConfigError
{
public:
  using ConfigError::ConfigError;
};

//! A kernel that lacks a moment or property required by an operation.
class UnsupportedKernel : public ConfigError
{
public:
  using ConfigError::ConfigError;
};

//! Failures detected while computing: quadrature, sampling, degenerate data.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

class SamplingError : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

class DegenerateSample : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

} // namespace kfrontier
