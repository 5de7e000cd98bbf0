#include "manyone/unitline.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace manyone {

namespace {

using Terms = std::vector<std::pair<std::uint64_t, Elem>>;

// Sum of c x^e evaluated term by term on F^*.
FiniteMapping sparse_on_units(const Field& F, const Terms& terms) {
  std::vector<Point> dom;
  for (auto x : F.nonzero()) dom.push_back(x.v);
  return FiniteMapping::tabulate(std::move(dom), [&](Point x) {
    Elem acc = F.zero();
    for (const auto& [e, c] : terms) acc = F.add(acc, F.mul(c, F.pow({x}, static_cast<std::int64_t>(e))));
    return acc.v;
  });
}

std::vector<Point> codes(const std::vector<Elem>& xs) {
  std::vector<Point> out;
  out.reserve(xs.size());
  for (auto x : xs) out.push_back(x.v);
  return out;
}

FamilyCheck compare(std::string name, const FiniteMapping& f, std::size_t m, bool predicted) {
  const auto rep = check_m_to_1(f, m);
  return {std::move(name), m, predicted, rep.verdict, rep.exceptional_set};
}

// Multiplicities beyond the domain size carry no information and are skipped.
void push(FamilyRecord& rec, std::string name, const FiniteMapping& f, std::size_t m, bool predicted) {
  if (m <= f.size()) rec.checks.push_back(compare(std::move(name), f, m, predicted));
}

void require_char2(const Field& F) {
  if (F.p() != 2) throw HypothesisError("characteristic 2 required");
  half_order(F);
}

Elem base_element(const Field& F, Elem c) {
  if (!F.in_subfield(c, F.n() / 2)) throw HypothesisError(F.format(c) + " is not in F_q");
  if (c == F.zero()) throw HypothesisError("c must be nonzero");
  return c;
}

void require_rootless(const Poly& P, const std::string& what) {
  const auto& F = P.field();
  for (auto x : unit_circle(F))
    if (P(x) == F.zero()) throw HypothesisError(what + " vanishes at " + F.format(x) + " in U_(q+1)");
}

Terms g3_terms(const Field& F, Elem c, int shape) {
  const auto q = half_order(F);
  if (shape == 0) return {{3 * q, F.one()}, {q + 2, F.one()}, {3, c}};
  return {{3 * q, c}, {2 * q + 1, F.one()}, {3, F.one()}};
}

Terms g5_terms(const Field& F, int shape) {
  const auto q = half_order(F);
  if (shape == 0) return {{4 * q + 1, F.one()}, {q + 4, F.one()}, {5, F.one()}};
  return {{5 * q, F.one()}, {4 * q + 1, F.one()}, {q + 4, F.one()}};
}

// x^a * M(x^(q-1))^k * base(x), each factor evaluated on its own.
FiniteMapping lifted_on_units(const Field& F, const FiniteMapping& base, const Poly& M, std::uint64_t a,
                              std::uint64_t k) {
  const auto q = static_cast<std::int64_t>(half_order(F));
  return FiniteMapping::tabulate(base.domain(), [&](Point x) {
    const Elem mx = M(F.pow({x}, q - 1));
    return F.mul(F.mul(F.pow({x}, static_cast<std::int64_t>(a)), F.pow(mx, static_cast<std::int64_t>(k))),
                 Elem{base.at(x)})
        .v;
  });
}

// x^r h(x^s) evaluated literally on F^*.
FiniteMapping literal_on_units(const CycloForm& f) {
  const auto& F = f.field();
  std::vector<Point> dom;
  for (auto x : F.nonzero()) dom.push_back(x.v);
  return FiniteMapping::tabulate(std::move(dom), [&](Point x) {
    const Elem hx = f.h()(F.pow({x}, static_cast<std::int64_t>(f.s())));
    return F.mul(F.pow({x}, static_cast<std::int64_t>(f.r())), hx).v;
  });
}

std::string shape_name(const Terms& t, const Field& F) {
  const auto q = half_order(F);
  std::ostringstream os;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << " + ";
    if (t[i].second != F.one()) os << F.format(t[i].second) << " ";
    os << "x^" << t[i].first;
  }
  os << " (q=" << q << ")";
  return os.str();
}

}  // namespace

std::uint64_t half_order(const Field& F) {
  if (F.n() % 2) throw std::invalid_argument("F_(q^2) needs an even extension degree");
  return ipow(F.p(), F.n() / 2);
}

Elem conj(const Field& F, Elem x) { return F.frobenius(x, F.n() / 2); }

std::vector<Elem> unit_circle(const Field& F) { return F.unity_subgroup(half_order(F) + 1); }

std::vector<Elem> base_line(const Field& F) {
  half_order(F);
  return F.subfield(F.n() / 2);
}

Elem base_trace(const Field& F, Elem c) { return F.relative_trace(c, F.n() / 2, 1); }

Field quadratic_field(std::uint32_t p, unsigned k) { return Field::build(p, 2 * k); }

Elem ProjectivePoint::value() const {
  if (inf_) throw std::domain_error("the point at infinity has no field value");
  return x_;
}

RationalMap::RationalMap(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (!num_.field().same(den_.field())) throw std::invalid_argument("numerator and denominator over different fields");
  if (num_.is_zero() && den_.is_zero()) throw std::invalid_argument("0/0 is not a rational map");
}

RationalMap RationalMap::parse(const Field& F, std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return RationalMap(Poly::parse(F, text), Poly::constant(F, F.one()));
  if (text.find('/', slash + 1) != std::string_view::npos) throw ParseError("more than one '/' in rational map");
  return RationalMap(Poly::parse(F, text.substr(0, slash)), Poly::parse(F, text.substr(slash + 1)));
}

ProjectivePoint RationalMap::operator()(ProjectivePoint x) const {
  const auto& F = field();
  if (x.is_infinity()) {
    if (num_.is_zero()) return ProjectivePoint(F.zero());
    if (den_.is_zero() || num_.degree() > den_.degree()) return ProjectivePoint::infinity();
    if (num_.degree() < den_.degree()) return ProjectivePoint(F.zero());
    return ProjectivePoint(F.div(num_.leading(), den_.leading()));
  }
  const Elem n = num_(x.value()), d = den_(x.value());
  if (d != F.zero()) return ProjectivePoint(F.div(n, d));
  if (n != F.zero()) return ProjectivePoint::infinity();
  throw std::domain_error("0/0 at " + F.format(x.value()));
}

FiniteMapping RationalMap::on(const std::vector<Elem>& domain) const {
  return FiniteMapping::tabulate(codes(domain), [&](Point x) { return (*this)(Elem{x}).encode(field()); });
}

std::string RationalMap::to_string() const { return num_.to_string() + "/" + den_.to_string(); }

Deg1Map::Deg1Map(Field F, Elem a, Elem b, Elem c, Elem d) : f_(std::move(F)), a_(a), b_(b), c_(c), d_(d) {
  if (f_.mul(a, d) == f_.mul(b, c)) throw std::invalid_argument("degenerate degree-one map (ad = bc)");
}

Deg1Map Deg1Map::unit_form(const Field& F, Elem alpha, Elem beta) {
  return Deg1Map(F, conj(F, beta), conj(F, alpha), alpha, beta);
}

Deg1Map Deg1Map::line_form(const Field& F, Elem alpha, Elem beta) {
  return Deg1Map(F, beta, conj(F, beta), alpha, conj(F, alpha));
}

ProjectivePoint Deg1Map::operator()(ProjectivePoint x) const {
  if (x.is_infinity()) return c_ == f_.zero() ? x : ProjectivePoint(f_.div(a_, c_));
  const Elem den = f_.add(f_.mul(c_, x.value()), d_);
  if (den == f_.zero()) return ProjectivePoint::infinity();
  return ProjectivePoint(f_.div(f_.add(f_.mul(a_, x.value()), b_), den));
}

Deg1Map Deg1Map::then(const Deg1Map& o) const {
  const auto& F = f_;
  auto mix = [&](Elem p, Elem q, Elem r, Elem s) { return F.add(F.mul(p, q), F.mul(r, s)); };
  return Deg1Map(F, mix(o.a_, a_, o.b_, c_), mix(o.a_, b_, o.b_, d_), mix(o.c_, a_, o.d_, c_),
                 mix(o.c_, b_, o.d_, d_));
}

Deg1Map Deg1Map::inverse() const { return Deg1Map(f_, d_, f_.neg(b_), f_.neg(c_), a_); }

RationalMap Deg1Map::rational() const { return RationalMap(Poly(f_, {b_, a_}), Poly(f_, {d_, c_})); }

bool deg1_permutes_unit(const Deg1Map& map) {
  const auto& F = map.field();
  const auto q = half_order(F);
  const auto [a, b, c, d] = map.coeffs();
  // a mu = d^q and b mu = c^q for some mu = lambda^(q-1) in U_(q+1)
  const Elem mu = a != F.zero() ? F.div(conj(F, d), a) : F.div(conj(F, c), b);
  if (mu == F.zero() || !F.in_unity_subgroup(mu, q + 1)) return false;
  return F.mul(a, mu) == conj(F, d) && F.mul(b, mu) == conj(F, c);
}

bool deg1_unit_to_line(const Deg1Map& map) {
  const auto& F = map.field();
  const auto q = half_order(F);
  const auto [a, b, c, d] = map.coeffs();
  if (a == F.zero() || b == F.zero() || c == F.zero() || d == F.zero()) return false;
  const Elem mu = F.div(conj(F, a), b);
  return F.in_unity_subgroup(mu, q + 1) && F.mul(d, mu) == conj(F, c);
}

bool unit_pair_permutes(const Field& F, Elem alpha, Elem beta) {
  const auto q = static_cast<std::int64_t>(half_order(F));
  if (F.pow(alpha, q + 1) == F.pow(beta, q + 1)) return false;
  return deg1_permutes_unit(Deg1Map::unit_form(F, alpha, beta));
}

bool line_pair_bijective(const Field& F, Elem alpha, Elem beta) {
  const auto q = static_cast<std::int64_t>(half_order(F));
  if (alpha == F.zero() || beta == F.zero() || F.pow(alpha, q - 1) == F.pow(beta, q - 1)) return false;
  return deg1_unit_to_line(Deg1Map::line_form(F, alpha, beta));
}

bool permutes_unit_circle(const RationalMap& map) {
  const auto& F = map.field();
  const auto q = half_order(F);
  std::vector<Point> seen;
  try {
    for (auto x : unit_circle(F)) {
      const auto y = map(x);
      if (y.is_infinity() || !F.in_unity_subgroup(y.value(), q + 1)) return false;
      seen.push_back(y.value().v);
    }
  } catch (const std::domain_error&) {
    return false;
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

bool maps_unit_circle_onto_line(const RationalMap& map) {
  const auto& F = map.field();
  std::vector<Point> seen;
  try {
    for (auto x : unit_circle(F)) {
      const auto y = map(x);
      if (!y.is_infinity() && !F.in_subfield(y.value(), F.n() / 2)) return false;
      seen.push_back(y.encode(F));
    }
  } catch (const std::domain_error&) {
    return false;
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

bool maps_line_onto_unit_circle(const RationalMap& map) {
  const auto& F = map.field();
  const auto q = half_order(F);
  std::vector<ProjectivePoint> dom{ProjectivePoint::infinity()};
  for (auto x : base_line(F)) dom.emplace_back(x);
  std::vector<Point> seen;
  try {
    for (const auto& x : dom) {
      const auto y = map(x);
      if (y.is_infinity() || !F.in_unity_subgroup(y.value(), q + 1)) return false;
      seen.push_back(y.value().v);
    }
  } catch (const std::domain_error&) {
    return false;
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

bool rootless_on_unit_circle(const Poly& P) {
  const auto& F = P.field();
  for (auto x : unit_circle(F))
    if (P(x) == F.zero()) return false;
  return true;
}

bool conjugation_law_holds(const Poly& P) {
  const auto& F = P.field();
  const Poly Pq = P.frobenius_coeffs(F.n() / 2);
  for (auto x : unit_circle(F))
    if (conj(F, P(x)) != Pq(F.inv(x))) return false;
  return true;
}

bool FamilyRecord::agree() const {
  return std::all_of(checks.begin(), checks.end(), [](const FamilyCheck& c) { return c.agree(); });
}

HalfplaneSplit halfplane_split(const Field& F) {
  require_char2(F);
  HalfplaneSplit out;
  for (auto c : base_line(F)) {
    if (c == F.zero()) continue;
    (base_trace(F, F.inv(c)) == F.zero() ? out.A0 : out.A1).push_back(c);
  }
  auto phi = [&](Point a) { return F.add(Elem{a}, F.inv(Elem{a})).v; };
  auto split = [&](const std::vector<Elem>& dom, const std::vector<Elem>& target, auto& fibers) {
    if (dom.empty()) return target.empty();
    const auto map = FiniteMapping::tabulate(codes(dom), phi);
    bool ok = map.image_set() == [&] {
      auto t = codes(target);
      std::sort(t.begin(), t.end());
      return t;
    }();
    for (auto c : target) {
      const auto pre = map.preimage(c.v);
      if (pre.size() != 2) {
        ok = false;
        fibers.push_back({Elem{}, Elem{}});
        continue;
      }
      Elem a{pre[0]}, b{pre[1]};
      if (F.rank(b) < F.rank(a)) std::swap(a, b);
      fibers.push_back({a, b});
    }
    return ok;
  };
  std::vector<Elem> d0, d1;
  for (auto a : base_line(F))
    if (a != F.zero() && a != F.one()) d0.push_back(a);
  for (auto a : unit_circle(F))
    if (a != F.one()) d1.push_back(a);
  out.two_to_one_onto_A0 = split(d0, out.A0, out.fibers0);
  out.two_to_one_onto_A1 = split(d1, out.A1, out.fibers1);
  return out;
}

RationalMap quintic_G(const Field& F) {
  const Elem o = F.one(), z = F.zero();
  return RationalMap(Poly(F, {z, o, o, z, z, o}), Poly(F, {o, z, z, o, o}));
}

CycloForm g3_trinomial(const Field& F, Elem c, int shape) {
  require_char2(F);
  base_element(F, c);
  const auto q = half_order(F);
  const Elem o = F.one(), z = F.zero();
  Poly h = shape == 0 ? Poly(F, {c, o, z, o}) : Poly(F, {o, z, o, c});
  return CycloForm(std::move(h), 3, q - 1);
}

CycloForm g5_trinomial(const Field& F, int shape) {
  require_char2(F);
  const auto q = half_order(F);
  const Elem o = F.one(), z = F.zero();
  Poly h = shape == 0 ? Poly(F, {o, o, z, z, o}) : Poly(F, {z, o, z, z, o, o});
  return CycloForm(std::move(h), 5, q - 1);
}

FamilyRecord g3_family(const Field& F, Elem c, bool full_scans) {
  require_char2(F);
  base_element(F, c);
  const auto q = half_order(F);
  const unsigned n = F.n() / 2;
  const Elem o = F.one(), z = F.zero();
  FamilyRecord rec;
  rec.family = "g3";
  rec.parameters = "n=" + std::to_string(n) + " c=" + F.format(c);

  const Poly cubic(F, {c, o, z, o});
  require_rootless(cubic, "x^3 + x + c");
  const auto U = unit_circle(F);

  const bool tr_shift = base_trace(F, F.add(o, F.inv(c))) == z;
  const auto g = RationalMap(Poly(F, {o, z, o, c}), cubic).on(U);
  push(rec, "g on U_(q+1)", g, 1, tr_shift);
  push(rec, "g on U_(q+1)", g, 3, !tr_shift);

  const bool tr_inv = base_trace(F, F.inv(c)) == z;
  if (n % 2 == 0) {
    const auto g1 = FiniteMapping::tabulate(codes(U), [&](Point x) {
      return F.mul({x}, F.pow(cubic({x}), static_cast<std::int64_t>((q - 1) / 3))).v;
    });
    push(rec, "g1 on U_(q+1)", g1, 1, tr_inv);
    push(rec, "g1 on U_(q+1)", g1, 3, !tr_inv);
  }
  if (full_scans && n >= 2) {
    for (int shape = 0; shape < 2; ++shape) {
      const auto terms = g3_terms(F, c, shape);
      const auto f = sparse_on_units(F, terms);
      push(rec, shape_name(terms, F), f, 1, n % 2 == 1 && !tr_inv);
      push(rec, shape_name(terms, F), f, 3, tr_inv);
    }
  }
  return rec;
}

FamilyRecord g5_family(const Field& F, bool full_scans) {
  require_char2(F);
  const auto q = half_order(F);
  const unsigned n = F.n() / 2;
  const Elem o = F.one(), z = F.zero();
  FamilyRecord rec;
  rec.family = "g5";
  rec.parameters = "n=" + std::to_string(n);

  const Poly den(F, {z, o, z, z, o, o});
  require_rootless(den, "x^5 + x^4 + x");
  const auto g = RationalMap(Poly(F, {o, o, z, z, o}), den).on(unit_circle(F));
  const bool five = n % 4 == 2;
  push(rec, "g on U_(q+1)", g, 1, !five);
  push(rec, "g on U_(q+1)", g, 5, five);

  if (!full_scans) return rec;
  if (n % 2 == 0) {
    const auto m = std::gcd<std::uint64_t>(5, q - 1);
    for (const Terms& t : {Terms{{4 * q + 1, o}, {3 * q + 2, o}, {5, o}}, Terms{{5 * q, o}, {2 * q + 3, o}, {q + 4, o}}})
      push(rec, shape_name(t, F), sparse_on_units(F, t), m, true);
  }
  if (n >= 2) {
    const Terms t{{4 * q - 1, o}, {3 * q, o}, {3, o}};
    const auto f = sparse_on_units(F, t);
    push(rec, shape_name(t, F), f, 1, n % 2 == 1);
    push(rec, shape_name(t, F), f, 3, n % 4 == 0);
  }
  for (int shape = 0; shape < 2; ++shape) {
    const auto t = g5_terms(F, shape);
    const auto f = sparse_on_units(F, t);
    push(rec, shape_name(t, F), f, 1, n % 2 == 1);
    push(rec, shape_name(t, F), f, 5, n % 2 == 0);
  }
  return rec;
}

FamilyRecord unit_transfer(const CycloForm& f, const Poly& M, Elem eps, std::uint64_t t, std::uint64_t k) {
  const auto& F = f.field();
  const auto q = half_order(F);
  if (f.s() != q - 1) throw HypothesisError("f must have the shape x^r h(x^(q-1))");
  if (!F.in_unity_subgroup(eps, q + 1)) throw HypothesisError("eps is not in U_(q+1)");
  if (M.is_zero() || t < static_cast<std::uint64_t>(M.degree()) || t > 2 * static_cast<std::uint64_t>(M.degree()))
    throw HypothesisError("need deg M <= t <= 2 deg M");
  if (std::gcd(f.r(), q - 1) != 1 || std::gcd(f.r() + k * t, q - 1) != 1)
    throw HypothesisError("need (r, q-1) = (r + kt, q-1) = 1");
  require_rootless(M, "M");
  const Poly Mq = M.frobenius_coeffs(F.n() / 2);
  for (auto x : unit_circle(F)) {
    const Elem rhs = F.mul(F.mul(eps, F.pow(x, static_cast<std::int64_t>(t))), Mq(F.inv(x)));
    if (rhs != M(x)) throw HypothesisError("M != eps x^t M^q at " + F.format(x));
  }
  transfer_family(f, M, eps, t, k);

  FamilyRecord rec;
  rec.family = "transfer";
  rec.parameters = f.to_string() + " M=" + M.to_string() + " t=" + std::to_string(t) + " k=" + std::to_string(k);
  const auto base = literal_on_units(f);
  const auto big = lifted_on_units(F, base, M, k * t, k);
  for (std::size_t m = 1; m <= q + 1; ++m)
    push(rec, "F", big, m, check_m_to_1(base, m).verdict);
  return rec;
}

FamilyRecord f3_transfer(const Field& F, Elem c, int shape, std::uint64_t d, std::uint64_t k) {
  require_char2(F);
  const auto q = half_order(F);
  const unsigned n = F.n() / 2;
  if (n < 3 || n % 2 == 0) throw HypothesisError("q = 2^n needs odd n >= 3");
  if (d % 2 == 0) throw HypothesisError("d must be odd");
  if (std::gcd(d, q + 1) != 1) throw HypothesisError("(d, q+1) != 1");
  if (std::gcd(3 + k * (d - 1), q - 1) != 1) throw HypothesisError("(3 + k(d-1), q-1) != 1");
  const CycloForm f = g3_trinomial(F, c, shape);
  const Poly hd = Poly::geometric(F, d);
  transfer_family(f, hd, F.one(), d - 1, k);

  const bool tr0 = base_trace(F, F.inv(c)) == F.zero();
  FamilyRecord rec;
  rec.family = "F3to1";
  rec.parameters = "n=" + std::to_string(n) + " c=" + F.format(c) + " shape=" + std::to_string(shape) +
                   " d=" + std::to_string(d) + " k=" + std::to_string(k);
  const auto base = sparse_on_units(F, g3_terms(F, c, shape));
  push(rec, "f", base, 3, tr0);
  push(rec, "F", lifted_on_units(F, base, hd, k * (d - 1), k), 3, tr0);
  return rec;
}

FamilyRecord f5_transfer(const Field& F, int shape, std::uint64_t d, std::uint64_t k) {
  require_char2(F);
  const auto q = half_order(F);
  const unsigned n = F.n() / 2;
  if (n % 4 != 2) throw HypothesisError("q = 2^n needs n = 2 mod 4");
  if (d % 2 == 0) throw HypothesisError("d must be odd");
  if (std::gcd(d, q + 1) != 1) throw HypothesisError("(d, q+1) != 1");
  if (std::gcd(5 + k * (d - 1), q - 1) != 1) throw HypothesisError("(5 + k(d-1), q-1) != 1");
  const CycloForm f = g5_trinomial(F, shape);
  const Poly hd = Poly::geometric(F, d);
  transfer_family(f, hd, F.one(), d - 1, k);

  FamilyRecord rec;
  rec.family = "F5to1";
  rec.parameters = "n=" + std::to_string(n) + " shape=" + std::to_string(shape) + " d=" + std::to_string(d) +
                   " k=" + std::to_string(k);
  const auto base = sparse_on_units(F, g5_terms(F, shape));
  push(rec, "f", base, 5, true);
  push(rec, "F", lifted_on_units(F, base, hd, k * (d - 1), k), 5, true);
  return rec;
}

}  // namespace manyone
