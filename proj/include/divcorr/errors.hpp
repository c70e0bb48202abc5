#pragma once

#include <stdexcept>
#include <string>

namespace divcorr {

// Argument outside the range a table or operation covers.
class range_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Caller violated a documented precondition (missing companion g, bad alpha, ...).
class contract_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Allocation would exceed the configured memory cap.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A multiplicative spec is not defined where evaluation needs it.
class evaluation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact integer arithmetic left the representable range.
class overflow_error : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Malformed or corrupted serialized table.
class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace divcorr
