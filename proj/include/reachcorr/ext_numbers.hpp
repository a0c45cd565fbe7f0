#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace reachcorr {

/// Non-negative extended real in [0, inf].
///
/// Infinity is a tagged state rather than an IEEE sentinel so that the
/// measure-theoretic convention 0 * inf = 0 holds (IEEE yields NaN).
class ExtReal {
 public:
  constexpr ExtReal() = default;

  // NOLINTNEXTLINE(google-explicit-constructor)
  ExtReal(double v) {
    if (v == std::numeric_limits<double>::infinity()) {
      infinite_ = true;
    } else if (!(v >= 0.0)) {
      throw std::domain_error("ExtReal must be a non-negative number, got " + std::to_string(v));
    } else {
      value_ = v;
    }
  }

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// Finite value; +inf (IEEE) when infinite. Only for reporting.
  constexpr double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  /// Finite payload. Throws on infinity.
  double value() const {
    if (infinite_) throw std::domain_error("ExtReal::value() on infinity");
    return value_;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ + b.value_);
  }

  friend ExtReal operator*(ExtReal a, ExtReal b) {
    if (a.is_zero() || b.is_zero()) return ExtReal();
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ * b.value_);
  }

  ExtReal& operator+=(ExtReal o) { return *this = *this + o; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

  friend constexpr std::partial_ordering operator<=>(ExtReal a, ExtReal b) {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

  constexpr bool is_zero() const { return !infinite_ && value_ == 0.0; }

  /// Absolute difference; inf when exactly one side is infinite, 0 when both are.
  friend ExtReal abs_diff(ExtReal a, ExtReal b) {
    if (a.infinite_ && b.infinite_) return ExtReal();
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ > b.value_ ? a.value_ - b.value_ : b.value_ - a.value_);
  }

  friend ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }
  friend ExtReal min(ExtReal a, ExtReal b) { return a < b ? a : b; }

  std::string to_string() const;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, ExtReal x);

/// Extended natural number in N u {inf}, same conventions as ExtReal.
class ExtNat {
 public:
  constexpr ExtNat() = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  constexpr ExtNat(std::uint64_t v) : value_(v) {}

  static constexpr ExtNat infinity() {
    ExtNat r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  std::uint64_t value() const {
    if (infinite_) throw std::domain_error("ExtNat::value() on infinity");
    return value_;
  }

  friend ExtNat operator+(ExtNat a, ExtNat b) {
    if (a.infinite_ || b.infinite_) return infinity();
    if (a.value_ > std::numeric_limits<std::uint64_t>::max() - b.value_) {
      throw std::overflow_error("ExtNat addition overflow");
    }
    return ExtNat(a.value_ + b.value_);
  }

  friend ExtNat operator*(ExtNat a, ExtNat b) {
    if ((!a.infinite_ && a.value_ == 0) || (!b.infinite_ && b.value_ == 0)) return ExtNat();
    if (a.infinite_ || b.infinite_) return infinity();
    if (a.value_ > std::numeric_limits<std::uint64_t>::max() / b.value_) {
      throw std::overflow_error("ExtNat multiplication overflow");
    }
    return ExtNat(a.value_ * b.value_);
  }

  ExtNat& operator+=(ExtNat o) { return *this = *this + o; }

  friend constexpr bool operator==(ExtNat a, ExtNat b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(ExtNat a, ExtNat b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    return a.value_ <=> b.value_;
  }

  ExtReal to_ext_real() const {
    return infinite_ ? ExtReal::infinity() : ExtReal(static_cast<double>(value_));
  }

  std::string to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

 private:
  std::uint64_t value_ = 0;
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, ExtNat x);

}  // namespace reachcorr
