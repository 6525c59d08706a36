// Copyright 2026 The Semsteg Authors.
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

#ifndef SEMSTEG_INTERVAL_H_
#define SEMSTEG_INTERVAL_H_

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace semsteg {

using Rational = mpq_class;

inline Rational MakeRational(const mpz_class& num, const mpz_class& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Half-open [low, high) with 0 <= low < high <= 1.
struct Interval {
  Rational low{0};
  Rational high{1};

  Rational length() const { return high - low; }
  bool contains(const Rational& x) const { return low <= x && x < high; }
  bool operator==(const Interval& other) const {
    return low == other.low && high == other.high;
  }

  std::string str() const {
    return "[" + low.get_str() + ", " + high.get_str() + ")";
  }
};

// [low, low + width) / den kept as integers; narrowing multiplies the
// denominator by the split total, so no gcd work is done along a walk.
class IntervalState {
 public:
  IntervalState() : low_(0), width_(1), den_(1) {}

  void Narrow(std::uint64_t before, std::uint64_t weight, std::uint64_t total) {
    low_ *= total;
    low_ += width_ * before;
    width_ *= weight;
    den_ *= total;
  }

  const mpz_class& low() const { return low_; }
  const mpz_class& width() const { return width_; }
  const mpz_class& den() const { return den_; }

  Interval ToInterval() const {
    return Interval{MakeRational(low_, den_), MakeRational(low_ + width_, den_)};
  }

 private:
  mpz_class low_;
  mpz_class width_;
  mpz_class den_;
};

// Bits shared by every binary expansion in [low, high): the longest s whose
// dyadic cell [0.s, 0.s + 2^-|s|) contains the interval.
template <typename Sink>
void ForEachCommonPrefixBit(mpz_class low, mpz_class high, const mpz_class& den,
                            Sink&& sink) {
  // Invariant: the remaining interval is [low, high) / den within [0, 1).
  while (true) {
    mpz_class twice_high = high * 2;
    if (twice_high <= den) {
      sink(false);
      low *= 2;
      high = std::move(twice_high);
      continue;
    }
    mpz_class twice_low = low * 2;
    if (twice_low >= den) {
      sink(true);
      low = twice_low - den;
      high = twice_high - den;
      continue;
    }
    return;
  }
}

}  // namespace semsteg

#endif  // SEMSTEG_INTERVAL_H_
