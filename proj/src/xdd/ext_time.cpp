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

#include "xddpipe/ext_time.hpp"

#include <stdexcept>

#include "xddpipe/errors.hpp"

namespace xddpipe {

ExtTime::ExtTime(std::int64_t cycles) : v_(cycles) {
  if (!is_finite())
    throw ArithmeticOverflow("cycle count " + std::to_string(cycles) + " out of finite range");
}

std::int64_t ExtTime::value() const {
  if (!is_finite()) throw std::domain_error("value() of infinite time " + to_string(*this));
  return v_;
}

ExtTime operator+(ExtTime a, ExtTime b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtTime::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtTime::pos_inf();
  std::int64_t r;
  if (__builtin_add_overflow(a.raw(), b.raw(), &r))
    throw ArithmeticOverflow("overflow in " + to_string(a) + " + " + to_string(b));
  return ExtTime(r);  // rejects the two sentinel values
}

ExtTime operator-(ExtTime a, ExtTime b) {
  if (!b.is_finite())
    throw std::domain_error("subtracting infinite time " + to_string(b));
  if (!a.is_finite()) return a;
  std::int64_t r;
  if (__builtin_sub_overflow(a.raw(), b.raw(), &r))
    throw ArithmeticOverflow("overflow in " + to_string(a) + " - " + to_string(b));
  return ExtTime(r);
}

std::string to_string(ExtTime t) {
  if (t.is_pos_inf()) return "+inf";
  if (t.is_neg_inf()) return "-inf";
  return std::to_string(t.raw());
}

}  // namespace xddpipe
