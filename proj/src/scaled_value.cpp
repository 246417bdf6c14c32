#include "sbt/scaled_value.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace sbt {

namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLn2 = 0.693147180559945309417232121458;

double scale2(double x, std::int64_t e) {
  if (e > 4000) e = 4000;
  if (e < -4000) e = -4000;
  return std::ldexp(x, static_cast<int>(e));
}

}  // namespace

ScaledValue::ScaledValue(complex v) : m_(v), e_(0) { normalize(); }

ScaledValue::ScaledValue(complex mantissa, std::int64_t exp2) : m_(mantissa), e_(exp2) {
  normalize();
}

void ScaledValue::normalize() {
  if (m_ == complex(0.0, 0.0)) {
    e_ = 0;
    return;
  }
  double a = std::abs(m_);
  if (!std::isfinite(a)) return;
  int k = std::ilogb(a);
  if (k == 0) return;
  m_ = complex(std::ldexp(m_.real(), -k), std::ldexp(m_.imag(), -k));
  e_ += k;
}

ScaledValue ScaledValue::exp(complex z) {
  double x = z.real();
  if (x == -std::numeric_limits<double>::infinity()) return ScaledValue();
  double e = std::floor(x / kLn2);
  double r = (x - e * kLn2Hi) - e * kLn2Lo;
  double mag = std::exp(r);
  complex m = z.imag() == 0.0 ? complex(mag, 0.0) : std::polar(mag, z.imag());
  return ScaledValue(m, static_cast<std::int64_t>(e));
}

double ScaledValue::log_scale() const { return static_cast<double>(e_) * kLn2; }

double ScaledValue::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(m_)) + log_scale();
}

ScaledValue::complex ScaledValue::value() const {
  return complex(scale2(m_.real(), e_), scale2(m_.imag(), e_));
}

ScaledValue& ScaledValue::operator*=(const ScaledValue& o) {
  m_ *= o.m_;
  e_ += o.e_;
  normalize();
  return *this;
}

ScaledValue& ScaledValue::operator/=(const ScaledValue& o) {
  m_ /= o.m_;
  e_ -= o.e_;
  normalize();
  return *this;
}

ScaledValue& ScaledValue::operator+=(const ScaledValue& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  std::int64_t d = e_ - o.e_;
  if (d >= 0) {
    if (d < 1100) m_ += complex(scale2(o.m_.real(), -d), scale2(o.m_.imag(), -d));
  } else {
    m_ = (-d < 1100 ? complex(scale2(m_.real(), d), scale2(m_.imag(), d)) : complex(0.0, 0.0)) +
         o.m_;
    e_ = o.e_;
  }
  normalize();
  return *this;
}

std::string ScaledValue::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "(" << m_.real() << "," << m_.imag() << ")*2^" << e_;
  return os.str();
}

double relative_difference(const ScaledValue& a, const ScaledValue& b) {
  if (b.is_zero()) return a.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
  return ((a - b) / b).abs();
}

}  // namespace sbt
