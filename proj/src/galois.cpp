#include "manyone/galois.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <tuple>

namespace manyone {

namespace {

using Digits = std::vector<std::uint32_t>;

void trim(Digits& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr) {
    auto qt = r / nr;
    std::tie(t, nt) = std::pair{nt, t - qt * nt};
    std::tie(r, nr) = std::pair{nr, r - qt * nr};
  }
  return static_cast<std::uint32_t>(mod_floor(t, p));
}

// Remainder of a by b over GF(p); b nonzero.
Digits poly_mod(Digits a, const Digits& b, std::uint32_t p) {
  trim(a);
  const auto db = b.size() - 1;
  const auto lead_inv = inv_mod(b.back(), p);
  while (a.size() > db) {
    const auto shift = a.size() - 1 - db;
    const std::uint64_t c = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
    for (std::size_t i = 0; i <= db; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * b[i]) % p);
    trim(a);
  }
  return a;
}

Digits poly_mulmod(const Digits& a, const Digits& b, const Digits& mod, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Digits prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  return poly_mod(std::move(prod), mod, p);
}

Digits poly_powmod(Digits base, std::uint64_t e, const Digits& mod, std::uint32_t p) {
  Digits r{1};
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, mod, p);
    base = poly_mulmod(base, base, mod, p);
    e >>= 1;
  }
  return r;
}

Digits to_digits(std::uint32_t v, std::uint32_t p, std::uint32_t n) {
  Digits d(n);
  for (auto& x : d) {
    x = v % p;
    v /= p;
  }
  trim(d);
  return d;
}

std::uint32_t from_digits(const Digits& d, std::uint32_t p) {
  std::uint32_t v = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) v = v * p + *it;
  return v;
}

std::uint64_t parse_uint(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(std::string("malformed ") + what + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string FieldSpec::to_string() const {
  std::ostringstream os;
  os << p << '^' << n << '/';
  for (std::size_t i = 0; i < modulus.size(); ++i) os << (i ? "," : "") << modulus[i];
  return os.str();
}

ParsedFieldSpec parse_field_spec(std::string_view text) {
  ParsedFieldSpec out;
  const auto caret = text.find('^');
  if (caret == std::string_view::npos) throw ParseError("field spec must look like p^n");
  const auto slash = text.find('/');
  out.p = static_cast<std::uint32_t>(parse_uint(text.substr(0, caret), "characteristic"));
  out.n = static_cast<std::uint32_t>(
      parse_uint(text.substr(caret + 1, slash == std::string_view::npos ? text.npos : slash - caret - 1),
                 "extension degree"));
  if (slash != std::string_view::npos) {
    std::vector<std::uint32_t> mod;
    auto rest = text.substr(slash + 1);
    while (true) {
      const auto comma = rest.find(',');
      mod.push_back(static_cast<std::uint32_t>(parse_uint(rest.substr(0, comma), "modulus coefficient")));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    out.modulus = std::move(mod);
  }
  return out;
}

bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& poly) {
  Digits f = poly;
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    const auto count = ipow(p, static_cast<unsigned>(d));
    for (std::uint64_t low = 0; low < count; ++low) {
      Digits g(d + 1);
      auto v = low;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t n) {
  const auto count = ipow(p, n);
  for (std::uint64_t low = 0; low < count; ++low) {
    Digits g = to_digits(static_cast<std::uint32_t>(low), p, n);
    g.resize(n + 1, 0);
    g[n] = 1;
    if (is_irreducible(p, g)) return g;
  }
  throw std::logic_error("no irreducible polynomial found");
}

Field Field::build(std::uint32_t p, std::uint32_t n, std::optional<std::vector<std::uint32_t>> modulus) {
  if (!is_prime(p)) throw ParseError("characteristic " + std::to_string(p) + " is not prime");
  if (n < 1) throw ParseError("extension degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    q *= p;
    if (q > kMaxFieldOrder) throw ScaleError("fields larger than 2^16 elements are not supported");
  }

  auto t = std::make_shared<Tables>();
  t->spec.p = p;
  t->spec.n = n;
  if (modulus) {
    if (modulus->size() != n + 1 || modulus->back() != 1)
      throw ParseError("modulus must be monic of degree " + std::to_string(n));
    for (auto c : *modulus)
      if (c >= p) throw ParseError("modulus coefficient out of range");
    if (!is_irreducible(p, *modulus)) throw ParseError("modulus is reducible");
    t->spec.modulus = *modulus;
  } else {
    t->spec.modulus = default_modulus(p, n);
  }
  t->q = static_cast<std::uint32_t>(q);

  const Digits& mod = t->spec.modulus;
  const auto qm1 = q - 1;
  const auto factors = prime_factors(qm1);
  std::uint32_t gen = 1;
  if (qm1 > 1) {
    for (gen = 2; gen < q; ++gen) {
      const auto d = to_digits(gen, p, n);
      bool primitive = true;
      for (auto f : factors)
        if (poly_powmod(d, qm1 / f, mod, p) == Digits{1}) {
          primitive = false;
          break;
        }
      if (primitive) break;
    }
  }

  t->exp.assign(2 * qm1, 0);
  t->log.assign(q, 0);
  const auto gd = to_digits(gen, p, n);
  Digits cur{1};
  for (std::uint64_t k = 0; k < qm1; ++k) {
    const auto v = from_digits(cur, p);
    t->exp[k] = t->exp[k + qm1] = v;
    t->log[v] = static_cast<std::uint32_t>(k);
    cur = poly_mulmod(cur, gd, mod, p);
  }

  if (p != 2 && n > 1) {
    t->zech.assign(qm1, -1);
    for (std::uint64_t k = 0; k < qm1; ++k) {
      auto d = to_digits(t->exp[k], p, n);
      d.resize(n, 0);
      d[0] = (d[0] + 1) % p;
      trim(d);
      if (!d.empty()) t->zech[k] = t->log[from_digits(d, p)];
    }
  }

  Field f;
  f.t_ = std::move(t);
  return f;
}

Field Field::parse(std::string_view text) {
  auto ps = parse_field_spec(text);
  return build(ps.p, ps.n, ps.modulus);
}

Elem Field::zech_add(Elem a, Elem b) const {
  if (a.v == 0) return b;
  if (b.v == 0) return a;
  const auto qm1 = t_->q - 1;
  const auto la = t_->log[a.v], lb = t_->log[b.v];
  const auto d = lb >= la ? lb - la : lb + qm1 - la;
  const auto z = t_->zech[d];
  if (z < 0) return {0};
  return {t_->exp[la + static_cast<std::uint32_t>(z)]};
}

Elem Field::neg(Elem a) const {
  const auto p = t_->spec.p;
  if (p == 2 || a.v == 0) return a;
  if (t_->spec.n == 1) return {p - a.v};
  return {t_->exp[t_->log[a.v] + (t_->q - 1) / 2]};
}

Elem Field::inv(Elem a) const {
  if (a.v == 0) throw std::domain_error("inverse of zero");
  const auto la = t_->log[a.v];
  return {t_->exp[la == 0 ? 0 : t_->q - 1 - la]};
}

Elem Field::pow(Elem a, std::int64_t e) const {
  if (a.v == 0) {
    if (e == 0) return one();
    if (e < 0) throw std::domain_error("negative power of zero");
    return zero();
  }
  const auto qm1 = t_->q - 1;
  const auto k = static_cast<__int128>(t_->log[a.v]) * (e % static_cast<std::int64_t>(qm1));
  auto r = static_cast<std::int64_t>(k % qm1);
  if (r < 0) r += qm1;
  return {t_->exp[r]};
}

Elem Field::from_int(std::int64_t c) const { return {static_cast<std::uint32_t>(mod_floor(c, t_->spec.p))}; }

Elem Field::from_coeffs(const std::vector<std::uint32_t>& c) const {
  if (c.size() > t_->spec.n) throw ParseError("too many coordinates for this field");
  Digits d = c;
  for (auto& x : d) x %= t_->spec.p;
  return {from_digits(d, t_->spec.p)};
}

std::vector<std::uint32_t> Field::coeffs(Elem x) const {
  auto d = to_digits(x.v, t_->spec.p, t_->spec.n);
  d.resize(t_->spec.n, 0);
  return d;
}

std::uint32_t Field::log(Elem a) const {
  if (a.v == 0) throw std::domain_error("discrete log of zero");
  return t_->log[a.v];
}

std::uint64_t Field::order(Elem a) const {
  const auto qm1 = t_->q - 1;
  return qm1 / std::gcd<std::uint64_t, std::uint64_t>(log(a), qm1);
}

std::vector<Elem> Field::unity_subgroup(std::uint64_t ell) const {
  const auto qm1 = t_->q - 1;
  if (ell == 0 || qm1 % ell) throw std::invalid_argument(std::to_string(ell) + " does not divide q-1");
  std::vector<Elem> out;
  out.reserve(ell);
  const auto step = qm1 / ell;
  for (std::uint64_t k = 0; k < ell; ++k) out.push_back({t_->exp[k * step]});
  return out;
}

bool Field::in_unity_subgroup(Elem x, std::uint64_t ell) const {
  if (x.v == 0) return false;
  const auto qm1 = t_->q - 1;
  return (static_cast<std::uint64_t>(t_->log[x.v]) * ell) % qm1 == 0;
}

Elem Field::frobenius(Elem x, unsigned k) const {
  if (x.v == 0) return x;
  const auto qm1 = t_->q - 1;
  std::uint64_t e = 1;
  for (unsigned i = 0; i < k % t_->spec.n; ++i) e = e * t_->spec.p % qm1;
  return {t_->exp[static_cast<std::uint64_t>(t_->log[x.v]) * e % qm1]};
}

bool Field::in_subfield(Elem x, unsigned d) const {
  if (d == 0 || t_->spec.n % d) return false;
  return frobenius(x, d) == x;
}

std::vector<Elem> Field::subfield(unsigned d) const {
  if (d == 0 || t_->spec.n % d) throw std::invalid_argument("subfield degree must divide n");
  std::vector<Elem> out;
  for (auto x : elements())
    if (in_subfield(x, d)) out.push_back(x);
  return out;
}

Elem Field::trace(unsigned sub_degree, Elem x) const {
  return relative_trace(x, t_->spec.n, sub_degree);
}

Elem Field::relative_trace(Elem x, unsigned from, unsigned to) const {
  if (from == 0 || to == 0 || t_->spec.n % from || from % to)
    throw std::invalid_argument("trace degrees must satisfy to | from | n");
  if (!in_subfield(x, from)) throw std::invalid_argument("element is not in the source subfield");
  Elem s = zero();
  for (unsigned i = 0; i < from / to; ++i) s = add(s, frobenius(x, i * to));
  return s;
}

std::vector<Elem> Field::elements() const {
  std::vector<Elem> out;
  out.reserve(t_->q);
  out.push_back(zero());
  for (std::uint32_t k = 0; k + 1 < t_->q; ++k) out.push_back({t_->exp[k]});
  return out;
}

std::vector<Elem> Field::nonzero() const {
  std::vector<Elem> out;
  out.reserve(t_->q - 1);
  for (std::uint32_t k = 0; k + 1 < t_->q; ++k) out.push_back({t_->exp[k]});
  return out;
}

std::string Field::format(Elem x) const {
  if (x.v < t_->spec.p) return std::to_string(x.v);
  return "g^" + std::to_string(t_->log[x.v]);
}

Elem Field::parse_element(std::string_view text) const {
  if (text.empty()) throw ParseError("empty coefficient");
  if (text[0] == 'g') {
    if (text.size() == 1) return primitive();
    if (text[1] != '^') throw ParseError("expected g^k, got '" + std::string(text) + "'");
    return gen_pow(static_cast<std::int64_t>(parse_uint(text.substr(2), "exponent")));
  }
  bool negative = text[0] == '-';
  auto v = parse_uint(negative ? text.substr(1) : text, "coefficient");
  auto r = static_cast<std::int64_t>(v % t_->spec.p);
  return from_int(negative ? -r : r);
}

}  // namespace manyone
