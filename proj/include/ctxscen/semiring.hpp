#pragma once

#include <concepts>
#include <string>

#include "ctxscen/rational.hpp"

namespace ctxscen {

template <class S>
concept Semiring = requires(const typename S::value_type& a, const typename S::value_type& b) {
  typename S::value_type;
  { S::zero() } -> std::convertible_to<typename S::value_type>;
  { S::one() } -> std::convertible_to<typename S::value_type>;
  { S::add(a, b) } -> std::convertible_to<typename S::value_type>;
  { S::mul(a, b) } -> std::convertible_to<typename S::value_type>;
  { S::eq(a, b) } -> std::convertible_to<bool>;
  { S::less(a, b) } -> std::convertible_to<bool>;
  { S::name() } -> std::convertible_to<std::string>;
};

/// Non-negative rationals under + and *.
struct RationalSemiring {
  using value_type = Rational;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational add(const Rational& a, const Rational& b) { return a + b; }
  static Rational mul(const Rational& a, const Rational& b) { return a * b; }
  static bool eq(const Rational& a, const Rational& b) { return a == b; }
  static bool less(const Rational& a, const Rational& b) { return a < b; }
  static bool admissible(const Rational& a) { return sgn(a) >= 0; }
  static std::string name() { return "rational"; }
  static std::string format(const Rational& a) { return to_string(a); }
};

/// Booleans with OR as addition and AND as multiplication.
struct BooleanSemiring {
  using value_type = bool;
  static bool zero() { return false; }
  static bool one() { return true; }
  static bool add(bool a, bool b) { return a || b; }
  static bool mul(bool a, bool b) { return a && b; }
  static bool eq(bool a, bool b) { return a == b; }
  static bool less(bool a, bool b) { return !a && b; }
  static bool admissible(bool) { return true; }
  static std::string name() { return "boolean"; }
  static std::string format(bool a) { return a ? "true" : "false"; }
};

static_assert(Semiring<RationalSemiring>);
static_assert(Semiring<BooleanSemiring>);

}  // namespace ctxscen
