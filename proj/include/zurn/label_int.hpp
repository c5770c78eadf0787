// Copyright 2026 The zurn Authors.
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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace zurn {

using BigInt = boost::multiprecision::cpp_int;

/// Raised when a label coordinate or a running sum leaves the 64-bit range.
class OverflowError : public std::overflow_error {
 public:
  OverflowError(std::uint64_t step, std::size_t coord, const std::string& what)
      : std::overflow_error("integer overflow at step " + std::to_string(step) + ", coordinate " +
                            std::to_string(coord) + ": " + what),
        step_(step),
        coord_(coord) {}

  /// Ball count the failed step would have produced.
  std::uint64_t step() const { return step_; }
  std::size_t coord() const { return coord_; }

 private:
  std::uint64_t step_;
  std::size_t coord_;
};

/// Arithmetic policy for a label integer type. Returns false on overflow.
template <typename Int>
struct LabelArith;

template <>
struct LabelArith<std::int64_t> {
  static constexpr bool kChecked = true;
  static bool add(std::int64_t a, std::int64_t b, std::int64_t& out) {
    return !__builtin_add_overflow(a, b, &out);
  }
  static bool mul(std::int64_t a, std::int64_t b, std::int64_t& out) {
    return !__builtin_mul_overflow(a, b, &out);
  }
  static double to_double(std::int64_t v) { return static_cast<double>(v); }
  static std::string to_string(std::int64_t v) { return std::to_string(v); }
};

template <>
struct LabelArith<BigInt> {
  static constexpr bool kChecked = false;
  static bool add(const BigInt& a, const BigInt& b, BigInt& out) {
    out = a + b;
    return true;
  }
  static bool mul(const BigInt& a, const BigInt& b, BigInt& out) {
    out = a * b;
    return true;
  }
  static double to_double(const BigInt& v) { return v.convert_to<double>(); }
  static std::string to_string(const BigInt& v) { return v.str(); }
};

}  // namespace zurn
