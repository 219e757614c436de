#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace gnn {

/// Exact rational number with a normalized int64 numerator/denominator.
/// The denominator is always positive and gcd(num, den) == 1.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);  // NOLINT(google-explicit-constructor)

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }
  bool is_positive() const { return num_ > 0; }
  bool is_zero() const { return num_ == 0; }

  std::string to_string() const;

  /// Parses "3", "-2", "1/2", " 5 / 6 ". Throws ConfigError on malformed text.
  static Rational parse(std::string_view text);

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator-(Rational a) { return Rational(-a.num_, a.den_); }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace gnn

template <>
struct std::hash<gnn::Rational> {
  std::size_t operator()(const gnn::Rational& r) const noexcept {
    return std::hash<std::int64_t>{}(r.num()) * 31u ^ std::hash<std::int64_t>{}(r.den());
  }
};
