#pragma once

#include <stdexcept>
#include <string>

namespace surfcr
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// geometry
class DegenerateGradient : public Error
{
public:
  using Error::Error;
};

class NoConvergence : public Error
{
public:
  using Error::Error;
};

class NotOnSurface : public Error
{
public:
  using Error::Error;
};

// mesh
class NonManifold : public Error
{
public:
  using Error::Error;
};

class InconsistentOrientation : public Error
{
public:
  using Error::Error;
};

class DegenerateTriangle : public Error
{
public:
  using Error::Error;
};

class ClosureDiverged : public Error
{
public:
  using Error::Error;
};

class ParseError : public Error
{
public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line)
  {
  }
  int line() const noexcept { return line_; }

private:
  int line_;
};

// recovery
class DegenerateFrame : public Error
{
public:
  using Error::Error;
};

class RankDeficient : public Error
{
public:
  using Error::Error;
};

class PatchGrowthExceeded : public Error
{
public:
  using Error::Error;
};

// solver
class IndefiniteMatrix : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

} // namespace surfcr
