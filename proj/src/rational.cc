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

#include "dpcausal/rational.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "dpcausal/error.h"

namespace dpcausal {
namespace {

bool IsDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// log of an arbitrary rational without overflowing double on huge
// numerators or denominators.
double LogOf(const Rational& q) {
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  long num_exp = 0;
  long den_exp = 0;
  const double num_mant = mpz_get_d_2exp(&num_exp, num.get_mpz_t());
  const double den_mant = mpz_get_d_2exp(&den_exp, den.get_mpz_t());
  return std::log(num_mant) - std::log(den_mant) +
         static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

}  // namespace

Rational ParseRational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw Error(ErrorKind::kParse,
                "rational must be written as integer/integer (e.g. \"1/2\"), got \"" +
                    std::string(text) + "\"");
  }
  std::string_view num = text.substr(0, slash);
  const std::string_view den = text.substr(slash + 1);
  const bool negative = !num.empty() && num.front() == '-';
  if (negative) num.remove_prefix(1);
  if (!IsDigits(num) || !IsDigits(den)) {
    throw Error(ErrorKind::kParse,
                "rational must be written as integer/integer (e.g. \"1/2\"), got \"" +
                    std::string(text) + "\"");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) {
    throw Error(ErrorKind::kParse,
                "zero denominator in \"" + std::string(text) + "\"");
  }
  if (negative) n = -n;
  Rational out(n, d);
  out.canonicalize();
  return out;
}

std::string FormatRational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational MakeRational(long numerator, long denominator) {
  Rational out(numerator, denominator);
  out.canonicalize();
  return out;
}

RatioBound::RatioBound(Rational value) : value_(std::move(value)) {
  value_.canonicalize();
}

RatioBound RatioBound::Infinite() {
  RatioBound out;
  out.infinite_ = true;
  out.value_ = 0;
  return out;
}

std::optional<RatioBound> RatioBound::Of(const Rational& numerator,
                                         const Rational& denominator) {
  if (sgn(denominator) == 0) {
    if (sgn(numerator) == 0) return std::nullopt;
    return Infinite();
  }
  return RatioBound(Rational(numerator / denominator));
}

double RatioBound::Epsilon() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  if (sgn(value_) == 0) return -std::numeric_limits<double>::infinity();
  return LogOf(value_);
}

std::string RatioBound::ToString() const {
  return infinite_ ? "inf" : FormatRational(value_);
}

std::string RatioBound::EpsilonString() const {
  if (infinite_) return "inf";
  if (sgn(value_) == 0) return "-inf";
  char buffer[64];
  double eps = Epsilon();
  if (eps == 0.0) eps = 0.0;  // no "-0.0000"
  std::snprintf(buffer, sizeof(buffer), "%.4f", eps);
  return buffer;
}

RatioBound RatioBound::Parse(std::string_view text) {
  if (text == "inf") return Infinite();
  return RatioBound(ParseRational(text));
}

RatioBound RatioBound::operator*(const RatioBound& other) const {
  if (infinite_ || other.infinite_) return Infinite();
  return RatioBound(Rational(value_ * other.value_));
}

bool operator==(const RatioBound& a, const RatioBound& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const RatioBound& a, const RatioBound& b) {
  if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
  if (a.infinite_) return std::strong_ordering::greater;
  if (b.infinite_) return std::strong_ordering::less;
  const int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace dpcausal
