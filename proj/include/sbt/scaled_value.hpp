#pragma once

#include <complex>
#include <cstdint>
#include <string>

namespace sbt {

// Complex number with an extended binary exponent: value = m * 2^e,
// |m| in [1,2) or m == 0.
class ScaledValue {
 public:
  using complex = std::complex<double>;

  ScaledValue() = default;
  ScaledValue(double v) : ScaledValue(complex(v, 0.0)) {}
  ScaledValue(complex v);
  ScaledValue(complex mantissa, std::int64_t exp2);

  // e^z without intermediate overflow.
  static ScaledValue exp(complex z);
  static ScaledValue exp(double x) { return exp(complex(x, 0.0)); }

  complex mantissa() const { return m_; }
  std::int64_t exponent2() const { return e_; }
  // Natural-log exponent: value = mantissa * e^{log_scale()}.
  double log_scale() const;
  // log|value|; -inf for zero.
  double log_abs() const;

  bool is_zero() const { return m_ == complex(0.0, 0.0); }
  // Native value; overflows to inf and underflows to 0 as usual.
  complex value() const;
  double real() const { return value().real(); }
  double abs() const { return std::abs(value()); }

  ScaledValue conj() const { return ScaledValue(std::conj(m_), e_, raw_tag{}); }
  ScaledValue operator-() const { return ScaledValue(-m_, e_, raw_tag{}); }

  ScaledValue& operator*=(const ScaledValue& o);
  ScaledValue& operator/=(const ScaledValue& o);
  ScaledValue& operator+=(const ScaledValue& o);
  ScaledValue& operator-=(const ScaledValue& o) { return *this += -o; }

  friend ScaledValue operator*(ScaledValue a, const ScaledValue& b) { return a *= b; }
  friend ScaledValue operator/(ScaledValue a, const ScaledValue& b) { return a /= b; }
  friend ScaledValue operator+(ScaledValue a, const ScaledValue& b) { return a += b; }
  friend ScaledValue operator-(ScaledValue a, const ScaledValue& b) { return a -= b; }

  std::string to_string() const;

 private:
  struct raw_tag {};
  ScaledValue(complex m, std::int64_t e, raw_tag) : m_(m), e_(e) {}
  void normalize();

  complex m_{0.0, 0.0};
  std::int64_t e_ = 0;
};

// |a - b| / |b| computed without leaving the extended range.
double relative_difference(const ScaledValue& a, const ScaledValue& b);

}  // namespace sbt
