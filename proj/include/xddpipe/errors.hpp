// Copyright 2026 The xddpipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XDDPIPE_ERRORS_HPP
#define XDDPIPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xddpipe {

/// Finite arithmetic left the 64-bit range.
class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// A node would break the event order of its children.
class OrderingViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Evaluation reached an event the configuration says nothing about.
class UndefinedEvent : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Operands built over different slot layouts (or of mismatched size).
class LayoutMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad input document. `where` locates the offending item, e.g.
/// "blocks[2].instructions[0].class".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what),
        where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// An analysis safety valve tripped (iterations, states per block, ...).
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency check failed. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace xddpipe

#endif  // XDDPIPE_ERRORS_HPP
