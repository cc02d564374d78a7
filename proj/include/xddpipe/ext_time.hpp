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

#ifndef XDDPIPE_EXT_TIME_HPP
#define XDDPIPE_EXT_TIME_HPP

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace xddpipe {

/// Cycle count extended with -inf and +inf.
///
/// The infinities are stored as the two extreme int64 values, so the
/// natural integer order is the extended order. Finite values live strictly
/// between them; arithmetic that would reach either end throws
/// ArithmeticOverflow instead of wrapping.
///
/// Addition follows the semiring convention: -inf absorbs everything,
/// including +inf.
class ExtTime {
 public:
  constexpr ExtTime() = default;
  // Implicit on purpose: leaves are written as plain integers everywhere.
  ExtTime(std::int64_t cycles);  // NOLINT(google-explicit-constructor)

  static constexpr ExtTime pos_inf() { return ExtTime(kPosInf, Raw{}); }
  static constexpr ExtTime neg_inf() { return ExtTime(kNegInf, Raw{}); }

  constexpr bool is_finite() const { return v_ != kPosInf && v_ != kNegInf; }
  constexpr bool is_pos_inf() const { return v_ == kPosInf; }
  constexpr bool is_neg_inf() const { return v_ == kNegInf; }

  /// Finite value; throws std::domain_error on an infinity.
  std::int64_t value() const;
  /// Storage word; stable key for hashing.
  constexpr std::int64_t raw() const { return v_; }

  friend constexpr auto operator<=>(ExtTime, ExtTime) = default;

 private:
  struct Raw {};
  static constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();
  static constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
  constexpr ExtTime(std::int64_t v, Raw) : v_(v) {}

  std::int64_t v_ = 0;
};

ExtTime operator+(ExtTime a, ExtTime b);
/// `a - b` for finite `b`; ±inf - t = ±inf. Throws std::domain_error when `b`
/// is infinite.
ExtTime operator-(ExtTime a, ExtTime b);

/// "7", "+inf", "-inf".
std::string to_string(ExtTime t);

}  // namespace xddpipe

#endif  // XDDPIPE_EXT_TIME_HPP
