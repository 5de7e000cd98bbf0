#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "manyone/arith.hpp"

namespace manyone {

// A field element, stored as the base-p integer c0 + c1 p + ... + c_{n-1} p^{n-1}
// of its polynomial-basis coordinates. Only meaningful together with its Field.
struct Elem {
  std::uint32_t v = 0;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t n = 1;
  std::vector<std::uint32_t> modulus;  // monic, low-to-high, length n + 1

  std::uint64_t q() const { return ipow(p, n); }
  std::string to_string() const;  // "p^n/c0,...,cn"
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// Parses "p^n" or "p^n/c0,c1,...,cn". The modulus is not validated here.
struct ParsedFieldSpec {
  std::uint32_t p = 0;
  std::uint32_t n = 0;
  std::optional<std::vector<std::uint32_t>> modulus;
};
ParsedFieldSpec parse_field_spec(std::string_view text);

bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& poly);
std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t n);

// GF(p^n) with exp/log tables. Cheap to copy: all copies share one immutable table set.
class Field {
 public:
  Field() = default;

  static Field build(std::uint32_t p, std::uint32_t n,
                     std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);
  static Field parse(std::string_view text);

  const FieldSpec& spec() const { return t_->spec; }
  std::uint32_t p() const { return t_->spec.p; }
  std::uint32_t n() const { return t_->spec.n; }
  std::uint32_t q() const { return t_->q; }
  bool valid() const { return static_cast<bool>(t_); }
  bool same(const Field& o) const { return t_ == o.t_ || (t_ && o.t_ && t_->spec == o.t_->spec); }

  Elem zero() const { return {0}; }
  Elem one() const { return {1}; }
  Elem from_int(std::int64_t c) const;
  Elem from_coeffs(const std::vector<std::uint32_t>& c) const;
  std::vector<std::uint32_t> coeffs(Elem x) const;
  bool contains(Elem x) const { return x.v < t_->q; }

  Elem add(Elem a, Elem b) const {
    if (t_->spec.p == 2) return {a.v ^ b.v};
    if (t_->spec.n == 1) return {(a.v + b.v) % t_->spec.p};
    return zech_add(a, b);
  }
  Elem neg(Elem a) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a.v == 0 || b.v == 0) return {0};
    return {t_->exp[t_->log[a.v] + t_->log[b.v]]};
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::int64_t e) const;

  Elem primitive() const { return {t_->exp[1]}; }
  Elem gen_pow(std::int64_t k) const { return {t_->exp[mod_floor(k, t_->q - 1)]}; }
  std::uint32_t log(Elem a) const;  // discrete log base primitive(); throws on zero
  std::uint64_t order(Elem a) const;

  // U_ell sorted by discrete log.
  std::vector<Elem> unity_subgroup(std::uint64_t ell) const;
  bool in_unity_subgroup(Elem x, std::uint64_t ell) const;

  Elem frobenius(Elem x, unsigned k = 1) const;  // x^(p^k)
  bool in_subfield(Elem x, unsigned d) const;
  std::vector<Elem> subfield(unsigned d) const;  // canonical order
  Elem trace(unsigned sub_degree, Elem x) const;
  // Trace from the degree-`from` subfield (which must contain x) down to degree `to`.
  Elem relative_trace(Elem x, unsigned from, unsigned to) const;

  // Canonical order: 0 first, then g^0, g^1, ..., g^(q-2).
  std::vector<Elem> elements() const;
  std::vector<Elem> nonzero() const;
  std::uint32_t rank(Elem x) const { return x.v == 0 ? 0 : 1 + t_->log[x.v]; }

  // Prime-subfield elements print as integers, everything else as "g^k".
  std::string format(Elem x) const;
  Elem parse_element(std::string_view text) const;

 private:
  struct Tables {
    FieldSpec spec;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> exp;   // length 2(q-1)
    std::vector<std::uint32_t> log;   // length q, log[0] unused
    std::vector<std::int64_t> zech;   // log(1 + g^k), -1 when 1 + g^k = 0
  };
  Elem zech_add(Elem a, Elem b) const;
  std::shared_ptr<const Tables> t_;
};

}  // namespace manyone
