#include "gradednn/rational.hpp"

#include <charconv>
#include <numeric>

#include "gradednn/errors.hpp"

namespace gnn {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("malformed rational: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text, text));
  const auto den = parse_int(text.substr(slash + 1), text);
  if (den == 0) throw ConfigError("rational with zero denominator: '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash), text), den);
}

Rational operator+(Rational a, Rational b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  return Rational(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_);
}

Rational operator-(Rational a, Rational b) { return a + (-b); }

Rational operator*(Rational a, Rational b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  // Cross-multiplication in 128 bits keeps the comparison exact.
  __extension__ using wide = __int128;
  const wide lhs = static_cast<wide>(a.num_) * b.den_;
  const wide rhs = static_cast<wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace gnn
