// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#pragma once

#include <stdexcept>
#include <string>

namespace kglf {

enum class ErrorCode {
  unknown_id,
  duplicate,
  schema_violation,
  invalid_argument,
  insufficient_data,
  parse_error,
  io_error,
  conflict,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a code so callers (CLI, HTTP
// service, Python bindings) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kglf
