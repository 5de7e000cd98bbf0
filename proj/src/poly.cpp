#include "manyone/poly.hpp"

#include <stdexcept>

namespace manyone {

Poly::Poly(Field f, std::vector<Elem> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
  for (auto c : c_)
    if (!f_.contains(c)) throw std::invalid_argument("coefficient outside the field");
  while (!c_.empty() && c_.back().v == 0) c_.pop_back();
}

Poly Poly::monomial(Field f, Elem c, std::size_t degree) {
  std::vector<Elem> v(degree + 1);
  v[degree] = c;
  return Poly(std::move(f), std::move(v));
}

Poly Poly::parse(Field f, std::string_view text) {
  std::vector<Elem> v;
  while (true) {
    const auto comma = text.find(',');
    auto tok = text.substr(0, comma);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    v.push_back(f.parse_element(tok));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return Poly(std::move(f), std::move(v));
}

Poly Poly::geometric(Field f, std::size_t d) {
  std::vector<Elem> v(d, f.one());
  return Poly(std::move(f), std::move(v));
}

Elem Poly::eval(const Field& f, Elem x) const {
  if (!f.same(f_)) throw std::invalid_argument("polynomial and point live in different fields");
  if (!f.contains(x)) throw std::invalid_argument("point outside the field");
  return (*this)(x);
}

void Poly::require_same(const Poly& o) const {
  if (!f_.same(o.f_)) throw std::invalid_argument("polynomials over different fields");
}

Poly Poly::operator+(const Poly& o) const {
  require_same(o);
  std::vector<Elem> v(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f_.add(coeff(i), o.coeff(i));
  return Poly(f_, std::move(v));
}

Poly Poly::operator-(const Poly& o) const {
  require_same(o);
  std::vector<Elem> v(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f_.sub(coeff(i), o.coeff(i));
  return Poly(f_, std::move(v));
}

Poly Poly::operator*(const Poly& o) const {
  require_same(o);
  if (c_.empty() || o.c_.empty()) return zero(f_);
  std::vector<Elem> v(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].v == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] = f_.add(v[i + j], f_.mul(c_[i], o.c_[j]));
  }
  return Poly(f_, std::move(v));
}

Poly Poly::scale(Elem c) const {
  std::vector<Elem> v(c_);
  for (auto& x : v) x = f_.mul(x, c);
  return Poly(f_, std::move(v));
}

Poly Poly::pow(std::uint64_t e) const {
  Poly r = constant(f_, f_.one()), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Poly Poly::compose(const Poly& inner) const {
  require_same(inner);
  Poly acc = zero(f_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + constant(f_, *it);
  return acc;
}

Poly Poly::stretch(std::size_t e) const {
  if (e == 0) return constant(f_, (*this)(f_.one()));
  if (c_.empty()) return *this;
  std::vector<Elem> v((c_.size() - 1) * e + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) v[i * e] = c_[i];
  return Poly(f_, std::move(v));
}

Poly Poly::frobenius_coeffs(unsigned k) const {
  std::vector<Elem> v(c_);
  for (auto& x : v) x = f_.frobenius(x, k);
  return Poly(f_, std::move(v));
}

std::string Poly::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += f_.format(c_[i]);
  }
  return s;
}

}  // namespace manyone
