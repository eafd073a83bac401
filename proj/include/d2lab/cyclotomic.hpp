#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "d2lab/rational.hpp"

namespace d2lab {

namespace detail {

using IntPoly = std::vector<long>;  // ascending coefficients

inline long euler_phi(long m) {
  long result = m;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

inline IntPoly exact_divide(IntPoly num, const IntPoly& den) {
  IntPoly q(num.size() - den.size() + 1, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    q[i] = num[i + den.size() - 1];  // den is monic
    for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= q[i] * den[j];
  }
  return q;
}

/// The m-th cyclotomic polynomial: x^m - 1 divided by Phi_d for every proper
/// divisor d of m. Divisors are filled in ascending order and cached.
inline const IntPoly& cyclotomic_polynomial(long m) {
  static std::mutex mutex;
  static std::map<long, IntPoly> cache;
  std::lock_guard<std::mutex> lock(mutex);
  for (long d = 1; d <= m; ++d) {
    if (m % d != 0 || cache.count(d) != 0) continue;
    IntPoly poly(static_cast<std::size_t>(d) + 1, 0);
    poly[0] = -1;
    poly[static_cast<std::size_t>(d)] = 1;
    for (long e = 1; e < d; ++e) {
      if (d % e == 0) poly = exact_divide(std::move(poly), cache.at(e));
    }
    cache.emplace(d, std::move(poly));
  }
  return cache.at(m);
}

}  // namespace detail

/// Exact element of the cyclotomic field Q(zeta_m), stored as the coefficient
/// vector of its canonical representative modulo the m-th cyclotomic
/// polynomial (length phi(m)). Values that are rational carry conductor 1.
class Cyclotomic {
 public:
  Cyclotomic() : conductor_(1), coeffs_{Rational(0)} {}
  Cyclotomic(int v) : conductor_(1), coeffs_{Rational(v)} {}  // NOLINT(google-explicit-constructor)
  Cyclotomic(long v) : conductor_(1), coeffs_{Rational(v)} {}  // NOLINT(google-explicit-constructor)
  Cyclotomic(const Rational& v) : conductor_(1), coeffs_{v} {}  // NOLINT(google-explicit-constructor)

  /// zeta_m^k.
  static Cyclotomic root_of_unity(long m, long k = 1) {
    if (m < 1) throw std::invalid_argument("Cyclotomic: conductor must be positive");
    std::vector<Rational> poly(static_cast<std::size_t>(m), Rational(0));
    poly[static_cast<std::size_t>(((k % m) + m) % m)] = Rational(1);
    return reduce(poly, m);
  }

  /// Canonical representative of sum_k poly[k] zeta_m^k. Exponents are taken
  /// mod m first, so poly may have any length.
  static Cyclotomic reduce(const std::vector<Rational>& poly, long m) {
    if (m < 1) throw std::invalid_argument("Cyclotomic: conductor must be positive");
    std::vector<Rational> folded(static_cast<std::size_t>(m), Rational(0));
    for (std::size_t k = 0; k < poly.size(); ++k) {
      folded[k % static_cast<std::size_t>(m)] += poly[k];
    }
    Cyclotomic out;
    out.conductor_ = m;
    out.coeffs_ = reduce_mod_phi(std::move(folded), m);
    out.normalize();
    return out;
  }

  [[nodiscard]] long conductor() const { return conductor_; }
  [[nodiscard]] const std::vector<Rational>& coefficients() const { return coeffs_; }

  [[nodiscard]] bool is_rational() const {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c.is_zero(); });
  }
  [[nodiscard]] bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.is_zero(); });
  }
  [[nodiscard]] bool is_one() const { return is_rational() && coeffs_[0].is_one(); }
  /// The rational value; throws if the number is irrational.
  [[nodiscard]] Rational to_rational() const {
    if (!is_rational()) throw std::domain_error("Cyclotomic: value is not rational");
    return coeffs_[0];
  }
  [[nodiscard]] std::size_t size_hint() const {
    std::size_t s = 0;
    for (const auto& c : coeffs_) s += c.size_hint();
    return s;
  }

  /// Image in Q(zeta_target), where conductor() divides target.
  [[nodiscard]] Cyclotomic embed(long target) const {
    if (target % conductor_ != 0) throw std::invalid_argument("Cyclotomic: embedding into non-multiple conductor");
    if (target == conductor_) return *this;
    const long step = target / conductor_;
    std::vector<Rational> poly(static_cast<std::size_t>(target), Rational(0));
    for (std::size_t k = 0; k < coeffs_.size(); ++k) poly[k * static_cast<std::size_t>(step)] = coeffs_[k];
    Cyclotomic out;
    out.conductor_ = target;
    out.coeffs_ = reduce_mod_phi(std::move(poly), target);
    return out;
  }

  /// Galois automorphism zeta -> zeta^{-1} (complex conjugation).
  [[nodiscard]] Cyclotomic conjugate() const { return galois(-1); }

  /// Galois automorphism zeta -> zeta^k for k coprime to the conductor.
  [[nodiscard]] Cyclotomic galois(long k) const {
    const long m = conductor_;
    std::vector<Rational> poly(static_cast<std::size_t>(m), Rational(0));
    for (std::size_t e = 0; e < coeffs_.size(); ++e) {
      const long img = (((static_cast<long>(e) * k) % m) + m) % m;
      poly[static_cast<std::size_t>(img)] += coeffs_[e];
    }
    return reduce(poly, m);
  }

  [[nodiscard]] Cyclotomic inverse() const;

  Cyclotomic& operator+=(const Cyclotomic& o) {
    const long m = std::lcm(conductor_, o.conductor_);
    Cyclotomic a = embed(m);
    const Cyclotomic b = o.embed(m);
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) a.coeffs_[k] += b.coeffs_[k];
    a.normalize();
    return *this = std::move(a);
  }
  Cyclotomic& operator-=(const Cyclotomic& o) { return *this += -o; }
  Cyclotomic& operator*=(const Cyclotomic& o) {
    if (o.conductor_ == 1) {
      for (auto& c : coeffs_) c *= o.coeffs_[0];
      normalize();
      return *this;
    }
    if (conductor_ == 1) {
      const Rational s = coeffs_[0];
      *this = o;
      for (auto& c : coeffs_) c *= s;
      normalize();
      return *this;
    }
    const long m = std::lcm(conductor_, o.conductor_);
    const Cyclotomic a = embed(m);
    const Cyclotomic b = o.embed(m);
    std::vector<Rational> prod(a.coeffs_.size() + b.coeffs_.size(), Rational(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        if (b.coeffs_[j].is_zero()) continue;
        prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return *this = reduce(prod, m);
  }
  Cyclotomic& operator/=(const Cyclotomic& o) { return *this *= o.inverse(); }

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }
  friend Cyclotomic operator-(Cyclotomic a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.conductor_ == b.conductor_) return a.coeffs_ == b.coeffs_;
    const long m = std::lcm(a.conductor_, b.conductor_);
    return a.embed(m).coeffs_ == b.embed(m).coeffs_;
  }

  /// Human-readable form such as "-1 - z3" or "1/2 + 3*z12^5".
  [[nodiscard]] std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      const Rational& c = coeffs_[k];
      if (c.is_zero()) continue;
      const bool neg = c.sign() < 0;
      const Rational mag = neg ? -c : c;
      if (first) {
        if (neg) os << '-';
      } else {
        os << (neg ? " - " : " + ");
      }
      first = false;
      if (k == 0) {
        os << mag;
        continue;
      }
      if (!mag.is_one()) os << mag << '*';
      os << 'z' << conductor_;
      if (k != 1) os << '^' << k;
    }
    if (first) os << '0';
    return os.str();
  }

  /// Parses the format produced by str().
  static Cyclotomic parse(std::string_view text);

  friend std::ostream& operator<<(std::ostream& os, const Cyclotomic& c) { return os << c.str(); }

 private:
  static std::vector<Rational> reduce_mod_phi(std::vector<Rational> poly, long m) {
    const detail::IntPoly& phi = detail::cyclotomic_polynomial(m);
    const std::size_t deg = phi.size() - 1;
    for (std::size_t i = poly.size(); i-- > deg;) {
      if (poly[i].is_zero()) continue;
      const Rational lead = poly[i];  // phi is monic
      for (std::size_t j = 0; j <= deg; ++j) {
        if (phi[j] != 0) poly[i - deg + j] -= lead * Rational(phi[j]);
      }
    }
    poly.resize(deg, Rational(0));
    if (poly.empty()) poly.emplace_back(0);
    return poly;
  }

  void normalize() {
    if (conductor_ != 1 && is_rational()) {
      const Rational c = coeffs_[0];
      conductor_ = 1;
      coeffs_.assign(1, c);
    }
  }

  long conductor_;
  std::vector<Rational> coeffs_;
};

inline Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw std::domain_error("Cyclotomic: inverse of zero");
  if (conductor_ == 1) return Cyclotomic(coeffs_[0].inverse());
  // Solve x * y = 1 through the multiplication matrix of x on the power basis.
  const long m = conductor_;
  const std::size_t n = coeffs_.size();
  std::vector<std::vector<Rational>> mat(n, std::vector<Rational>(n + 1, Rational(0)));
  for (std::size_t j = 0; j < n; ++j) {
    const Cyclotomic col = *this * root_of_unity(m, static_cast<long>(j));
    const Cyclotomic col_m = col.embed(m);
    for (std::size_t i = 0; i < n; ++i) mat[i][j] = col_m.coeffs_[i];
  }
  mat[0][n] = Rational(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && mat[p][c].is_zero()) ++p;
    if (p == n) throw std::logic_error("Cyclotomic: singular multiplication matrix");
    std::swap(mat[p], mat[c]);
    const Rational inv = mat[c][c].inverse();
    for (auto& e : mat[c]) e *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || mat[r][c].is_zero()) continue;
      const Rational f = mat[r][c];
      for (std::size_t k = c; k <= n; ++k) mat[r][k] -= f * mat[c][k];
    }
  }
  std::vector<Rational> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = mat[i][n];
  return reduce(y, m);
}

inline Cyclotomic Cyclotomic::parse(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw std::invalid_argument("Cyclotomic: empty string");
  Cyclotomic total(0);
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    const std::string term = s.substr(pos, end - pos);
    if (term.empty()) throw std::invalid_argument("Cyclotomic: malformed '" + std::string(text) + "'");
    Rational coeff(1);
    std::string root = term;
    if (auto star = term.find('*'); star != std::string::npos) {
      coeff = Rational::parse(term.substr(0, star));
      root = term.substr(star + 1);
    } else if (term.front() != 'z') {
      coeff = Rational::parse(term);
      root.clear();
    }
    Cyclotomic value(coeff);
    if (!root.empty()) {
      if (root.front() != 'z') throw std::invalid_argument("Cyclotomic: malformed term '" + term + "'");
      const auto caret = root.find('^');
      const long m = std::stol(root.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
      const long k = caret == std::string::npos ? 1 : std::stol(root.substr(caret + 1));
      value *= root_of_unity(m, k);
    }
    total += sign < 0 ? -value : value;
    pos = end;
  }
  return total;
}

}  // namespace d2lab
