#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "coarse/common.hpp"

namespace coarse {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// The field with two elements.
struct GF2 {
  std::uint8_t v = 0;
  constexpr GF2() = default;
  constexpr GF2(int x) : v(static_cast<std::uint8_t>(x & 1)) {}

  friend constexpr GF2 operator+(GF2 a, GF2 b) { return GF2(a.v ^ b.v); }
  friend constexpr GF2 operator-(GF2 a, GF2 b) { return GF2(a.v ^ b.v); }
  friend constexpr GF2 operator*(GF2 a, GF2 b) { return GF2(a.v & b.v); }
  friend constexpr GF2 operator/(GF2 a, GF2 b) {
    return b.v ? a : throw Error("division by zero in GF(2)");
  }
  constexpr GF2 operator-() const { return *this; }
  GF2& operator+=(GF2 b) { v ^= b.v; return *this; }
  GF2& operator-=(GF2 b) { v ^= b.v; return *this; }
  GF2& operator*=(GF2 b) { v &= b.v; return *this; }
  friend constexpr bool operator==(GF2 a, GF2 b) { return a.v == b.v; }
  friend constexpr bool operator!=(GF2 a, GF2 b) { return a.v != b.v; }
};

enum class Ring { GF2, Q, Z };

inline std::string ring_name(Ring r) {
  switch (r) {
    case Ring::GF2: return "gf2";
    case Ring::Q: return "q";
    case Ring::Z: return "z";
  }
  return "?";
}

inline Ring parse_ring(const std::string& s) {
  if (s == "gf2" || s == "GF2" || s == "2") return Ring::GF2;
  if (s == "q" || s == "Q") return Ring::Q;
  if (s == "z" || s == "Z") return Ring::Z;
  throw BadInput("unknown ring: " + s + " (expected gf2|q|z)");
}

template <class T> struct ring_of;
template <> struct ring_of<GF2> { static constexpr Ring value = Ring::GF2; };
template <> struct ring_of<Rational> { static constexpr Ring value = Ring::Q; };
template <> struct ring_of<Integer> { static constexpr Ring value = Ring::Z; };

template <class T>
inline constexpr bool is_field_v = !std::is_same_v<T, Integer>;

/// Signed unit for the alternating boundary sums; GF(2) ignores the sign.
template <class T>
inline T ring_sign(int i) {
  if constexpr (std::is_same_v<T, GF2>) {
    (void)i;
    return GF2(1);
  } else {
    return (i % 2 == 0) ? T(1) : T(-1);
  }
}

}  // namespace coarse
