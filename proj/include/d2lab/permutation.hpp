#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2lab {

/// Bijection of {0, ..., n-1} stored by images. Products compose right to
/// left: (a * b)(i) = a(b(i)).
class Permutation {
 public:
  using Point = std::uint16_t;

  Permutation() = default;
  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Point p : images_) {
      if (p >= images_.size() || seen[p]) throw std::invalid_argument("Permutation: images are not a bijection");
      seen[p] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.images_.resize(n);
    std::iota(p.images_.begin(), p.images_.end(), Point{0});
    return p;
  }

  /// Product of the given cycles acting on n points.
  static Permutation from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles) {
    Permutation p = identity(n);
    for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
      const auto& cyc = *it;
      std::vector<bool> used(n, false);
      for (int x : cyc) {
        if (x < 0 || static_cast<std::size_t>(x) >= n) throw std::invalid_argument("Permutation: cycle point out of range");
        if (used[static_cast<std::size_t>(x)]) throw std::invalid_argument("Permutation: repeated point in cycle");
        used[static_cast<std::size_t>(x)] = true;
      }
      Permutation c = identity(n);
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        c.images_[static_cast<std::size_t>(cyc[k])] = static_cast<Point>(cyc[(k + 1) % cyc.size()]);
      }
      p = c * p;
    }
    return p;
  }

  [[nodiscard]] std::size_t degree() const { return images_.size(); }
  [[nodiscard]] Point operator()(std::size_t i) const { return images_[i]; }
  [[nodiscard]] const std::vector<Point>& images() const { return images_; }

  [[nodiscard]] bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  [[nodiscard]] Permutation inverse() const {
    Permutation p;
    p.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) p.images_[images_[i]] = static_cast<Point>(i);
    return p;
  }

  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw std::invalid_argument("Permutation: degree mismatch");
    Permutation p;
    p.images_.resize(a.images_.size());
    for (std::size_t i = 0; i < a.images_.size(); ++i) p.images_[i] = a.images_[b.images_[i]];
    return p;
  }

  [[nodiscard]] std::size_t order() const {
    std::size_t ord = 1;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (std::size_t j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        ++len;
      }
      ord = std::lcm(ord, len);
    }
    return ord;
  }

  /// Disjoint cycles of length > 1, each starting at its smallest point.
  [[nodiscard]] std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i] || images_[i] == i) continue;
      std::vector<int> cyc;
      for (std::size_t j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        cyc.push_back(static_cast<int>(j));
      }
      out.push_back(std::move(cyc));
    }
    return out;
  }

  /// Cycle notation, e.g. "(0,1,2)(3,4)"; the identity prints as "()".
  [[nodiscard]] std::string str() const {
    std::ostringstream os;
    const auto cyc = cycles();
    if (cyc.empty()) return "()";
    for (const auto& c : cyc) {
      os << '(';
      for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
      os << ')';
    }
    return os.str();
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Point> images_;
};

/// Parses cycle notation. "(01)(23)" uses single digits; points above 9 need
/// separators: "(0,10,2)" or "(0 10 2)". Several permutations may be given
/// separated by ';' or by ',' between closing and opening parentheses.
inline std::vector<Permutation> parse_permutations(const std::string& text, std::size_t degree) {
  std::vector<Permutation> perms;
  std::vector<std::vector<int>> cycles;
  bool have_any = false;
  std::size_t i = 0;
  auto flush = [&] {
    if (have_any) perms.push_back(Permutation::from_cycles(degree, cycles));
    cycles.clear();
    have_any = false;
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '(') {
      const auto close = text.find(')', i);
      if (close == std::string::npos) throw std::invalid_argument("parse_permutations: unbalanced '(' in " + text);
      const std::string body = text.substr(i + 1, close - i - 1);
      std::vector<int> cyc;
      if (body.find_first_of(", ") != std::string::npos) {
        std::string tok;
        for (char c : body + ",") {
          if (c == ',' || c == ' ') {
            if (!tok.empty()) cyc.push_back(std::stoi(tok));
            tok.clear();
          } else if (std::isdigit(static_cast<unsigned char>(c))) {
            tok.push_back(c);
          } else {
            throw std::invalid_argument("parse_permutations: bad character in " + text);
          }
        }
      } else {
        for (char c : body) {
          if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("parse_permutations: bad character in " + text);
          cyc.push_back(c - '0');
        }
      }
      if (!cyc.empty()) cycles.push_back(std::move(cyc));
      have_any = true;
      i = close + 1;
    } else if (ch == ';' || ch == ',') {
      flush();
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else {
      throw std::invalid_argument("parse_permutations: unexpected '" + std::string(1, ch) + "' in " + text);
    }
  }
  flush();
  return perms;
}

}  // namespace d2lab

template <>
struct std::hash<d2lab::Permutation> {
  std::size_t operator()(const d2lab::Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : p.images()) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return h;
  }
};
