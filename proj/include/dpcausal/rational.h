// Copyright 2026 The dpcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPCAUSAL_RATIONAL_H_
#define DPCAUSAL_RATIONAL_H_

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace dpcausal {

// Exact arbitrary-precision rational. Every probability in the library is one
// of these; floating point only appears when printing epsilon.
using Rational = mpq_class;

// Accepts exactly "p/q" with integer p and positive integer q (optional leading
// minus on p). Decimal or bare-integer text is rejected with ErrorKind::kParse.
Rational ParseRational(std::string_view text);

// Canonical "p/q" form; integers print as "p/1".
std::string FormatRational(const Rational& value);

// Builds p/q in canonical form.
Rational MakeRational(long numerator, long denominator);

// A supremum of probability ratios: a nonnegative rational or +infinity.
// Ratios compare exactly; epsilon = ln(ratio) is derived for display only.
class RatioBound {
 public:
  // The neutral bound, 1 (epsilon 0): the supremum of an empty comparison set.
  RatioBound() : value_(1) {}
  explicit RatioBound(Rational value);

  static RatioBound Infinite();

  // numerator / denominator under the checker conventions: 0/0 has no value
  // (the comparison is vacuous), p/0 with p > 0 is infinite.
  static std::optional<RatioBound> Of(const Rational& numerator,
                                      const Rational& denominator);

  bool is_infinite() const { return infinite_; }
  // Precondition: !is_infinite().
  const Rational& value() const { return value_; }

  // Natural log of the ratio; +inf for an infinite bound.
  double Epsilon() const;

  // "p/q" or "inf".
  std::string ToString() const;
  // Epsilon to 4 decimal places, or "inf".
  std::string EpsilonString() const;

  // Parses the output of ToString().
  static RatioBound Parse(std::string_view text);

  RatioBound operator*(const RatioBound& other) const;

  friend bool operator==(const RatioBound& a, const RatioBound& b);
  friend std::strong_ordering operator<=>(const RatioBound& a,
                                          const RatioBound& b);

 private:
  bool infinite_ = false;
  Rational value_;
};

}  // namespace dpcausal

#endif  // DPCAUSAL_RATIONAL_H_
