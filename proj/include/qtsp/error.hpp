#pragma once

#include <stdexcept>
#include <string>

namespace qtsp {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed problem data: bad instance, out-of-range configuration values.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class InvalidInstance : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class InvalidTour : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// Vector/bitstring lengths that disagree with the problem they are used with.
class SizeMismatch : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// A request exceeding a hard capacity (enumeration bound, qubit cap, atom cap).
class CapacityExceeded : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// Failure inside a running backend (non-finite cost, diverging integrator).
class BackendFailure : public Error {
public:
  using Error::Error;
};

} // namespace qtsp
