#pragma once

#include <concepts>
#include <cstddef>
#include <string>

#include "d2lab/cyclotomic.hpp"
#include "d2lab/rational.hpp"

namespace d2lab {

/// Exact scalar field usable by the linear algebra and algebra engines.
template <class F>
concept ExactField = std::regular<F> && requires(const F& a, const F& b) {
  { F(0) };
  { F(1) };
  { a + b } -> std::convertible_to<F>;
  { a - b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { -a } -> std::convertible_to<F>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.inverse() } -> std::convertible_to<F>;
  { a.size_hint() } -> std::convertible_to<std::size_t>;
  { a.str() } -> std::convertible_to<std::string>;
};

static_assert(ExactField<Rational>);
static_assert(ExactField<Cyclotomic>);

/// Parses a scalar from its text form.
template <ExactField F>
F parse_scalar(const std::string& text) {
  if constexpr (std::same_as<F, Rational>) {
    return Rational::parse(text);
  } else {
    return Cyclotomic::parse(text);
  }
}

}  // namespace d2lab
