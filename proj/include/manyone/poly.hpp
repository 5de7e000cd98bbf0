#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "manyone/galois.hpp"

namespace manyone {

// Dense univariate polynomial over a Field, coefficients low-to-high, trailing zeros trimmed.
class Poly {
 public:
  Poly() = default;
  Poly(Field f, std::vector<Elem> coeffs);

  static Poly zero(Field f) { return Poly(std::move(f), {}); }
  static Poly constant(Field f, Elem c) { return Poly(std::move(f), {c}); }
  static Poly monomial(Field f, Elem c, std::size_t degree);
  static Poly x(Field f) { return monomial(f, f.one(), 1); }
  // Comma-separated coefficients, low-to-high; each an integer or "g^k".
  static Poly parse(Field f, std::string_view text);
  // h_d(x) = x^(d-1) + ... + x + 1
  static Poly geometric(Field f, std::size_t d);

  const Field& field() const { return f_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Elem leading() const { return c_.empty() ? Elem{} : c_.back(); }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Elem{}; }

  Elem operator()(Elem x) const {
    Elem acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = f_.add(f_.mul(acc, x), *it);
    return acc;
  }
  // Evaluation with an explicit field, rejecting a mismatch.
  Elem eval(const Field& f, Elem x) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scale(Elem c) const;
  Poly pow(std::uint64_t e) const;
  Poly compose(const Poly& inner) const;  // this(inner(x))
  Poly stretch(std::size_t e) const;      // this(x^e)
  // Coefficients raised to p^k; with p^k = q this is the P^(q) of a polynomial over F_{q^2}.
  Poly frobenius_coeffs(unsigned k) const;

  std::string to_string() const;  // coefficient format accepted by parse()
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_ && a.f_.same(b.f_); }

 private:
  void require_same(const Poly& o) const;
  Field f_;
  std::vector<Elem> c_;
};

}  // namespace manyone
