#include "manyone/towers.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace manyone {

namespace {

std::int64_t i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

void require_eps(const Field& F, Elem eps) {
  if (!F.in_unity_subgroup(eps, half_order(F) + 1)) throw HypothesisError("eps is not in U_(q+1)");
}

// P(x) = eps x^t conj(Q(x)) on U_(q+1)
void require_twisted(const Poly& P, const Poly& Q, Elem eps, std::uint64_t t, const std::string& what) {
  const auto& F = P.field();
  for (auto x : unit_circle(F))
    if (P(x) != F.mul(F.mul(eps, F.pow(x, i64(t))), conj(F, Q(x))))
      throw HypothesisError(what + " fails at " + F.format(x));
}

void require_rootless(const Poly& P, const std::string& what) {
  const auto& F = P.field();
  for (auto x : unit_circle(F))
    if (P(x) == F.zero()) throw HypothesisError(what + " vanishes at " + F.format(x) + " in U_(q+1)");
}

// eps read off at the first point where the denominator side is nonzero.
Elem read_eps(const Poly& P, const Poly& Q, std::uint64_t t) {
  const auto& F = P.field();
  for (auto x : unit_circle(F)) {
    const Elem d = F.mul(F.pow(x, i64(t)), conj(F, Q(x)));
    if (d != F.zero()) return F.div(P(x), d);
  }
  throw HypothesisError("cannot determine eps");
}

std::uint64_t deg(const Poly& p) { return p.is_zero() ? 0 : static_cast<std::uint64_t>(p.degree()); }

// sum_i c_i A^i B^(u-i) over the coefficients c of N, u = deg N
Poly homogenize(const Poly& N, const Poly& A, const Poly& B) {
  const auto u = deg(N);
  const auto& F = A.field();
  Poly acc = Poly::zero(F);
  for (std::uint64_t i = 0; i <= u; ++i) {
    if (N.coeff(i) == F.zero()) continue;
    acc = acc + (A.pow(i) * B.pow(u - i)).scale(N.coeff(i));
  }
  return acc;
}

TowerInstance finish(TowerInstance inst) {
  require_rootless(inst.H, "H");
  inst.twist %= half_order(inst.H.field()) + 1;
  return inst;
}

void require_line_target(const Poly& N) {
  const auto& F = N.field();
  if (N.is_zero()) throw HypothesisError("N must be nonzero");
  if (!maps_line_onto_unit_circle(RationalMap(N.frobenius_coeffs(F.n() / 2), N)))
    throw HypothesisError("N^(q)/N is not a bijection from F_q ∪ {inf} onto U_(q+1)");
}

std::uint64_t m1_of(const TowerInstance& inst, std::uint64_t r) {
  const auto q = half_order(inst.H.field());
  if (r < 1) throw std::invalid_argument("r must be positive");
  const auto m1 = std::gcd(r, q - 1);
  if ((r / m1) % (q + 1) != inst.twist)
    throw HypothesisError("r/m1 = " + std::to_string(r / m1) + " is not " + std::to_string(inst.twist) +
                          " mod q+1");
  return m1;
}

Poly power_mod_unity(Poly base, std::uint64_t e, std::uint64_t ell) {
  const auto& F = base.field();
  Poly acc = Poly::constant(F, F.one());
  base = reduce_mod_unity(base, ell);
  for (; e; e >>= 1) {
    if (e & 1) acc = reduce_mod_unity(acc * base, ell);
    if (e > 1) base = reduce_mod_unity(base * base, ell);
  }
  return acc;
}

}  // namespace

void check_unit_pair(const UnitPair& p) {
  const auto& F = p.M.field();
  require_eps(F, p.eps);
  if (p.M.is_zero() || p.t < deg(p.M)) throw HypothesisError("need t >= deg M");
  require_rootless(p.M, "M");
  require_twisted(p.L, p.M, p.eps, p.t, "L = eps x^t M^q");
  if (!permutes_unit_circle(RationalMap(p.L, p.M))) throw HypothesisError("L/M does not permute U_(q+1)");
}

void check_line_pair(const LinePair& p) {
  const auto& F = p.M.field();
  require_eps(F, p.eps);
  if (p.M.is_zero() || p.L.is_zero()) throw HypothesisError("L and M must be nonzero");
  if (p.t < std::max(deg(p.L), deg(p.M))) throw HypothesisError("need t >= max(deg L, deg M)");
  require_twisted(p.L, p.L, p.eps, p.t, "L = eps x^t L^q");
  require_twisted(p.M, p.M, p.eps, p.t, "M = eps x^t M^q");
  if (!maps_unit_circle_onto_line(RationalMap(p.L, p.M)))
    throw HypothesisError("L/M is not a bijection from U_(q+1) onto F_q ∪ {inf}");
}

UnitPair unit_pair_from(const Deg1Map& map) {
  if (!deg1_permutes_unit(map)) throw HypothesisError("map does not have the unit-circle shape");
  const auto [a, b, c, d] = map.coeffs();
  const auto& F = map.field();
  UnitPair p{Poly(F, {b, a}), Poly(F, {d, c}), F.one(), 1};
  p.eps = read_eps(p.L, p.M, 1);
  return p;
}

LinePair line_pair_from(const Deg1Map& map) {
  if (!deg1_unit_to_line(map)) throw HypothesisError("map does not have the line shape");
  const auto [a, b, c, d] = map.coeffs();
  const auto& F = map.field();
  LinePair p{Poly(F, {b, a}), Poly(F, {d, c}), F.one(), 1};
  p.eps = read_eps(p.M, p.M, 1);
  return p;
}

UnitPair stretch(const UnitPair& p, std::uint64_t k) {
  return {p.L.stretch(k), p.M.stretch(k), p.eps, p.t * k};
}

LinePair stretch(const LinePair& p, std::uint64_t k) {
  return {p.L.stretch(k), p.M.stretch(k), p.eps, p.t * k};
}

TowerInstance unit_tower(const UnitPair& p1, const UnitPair& p2, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  check_unit_pair(p1);
  check_unit_pair(p2);
  TowerInstance inst;
  inst.family = "unit";
  inst.kind = TowerKind::unit;
  inst.n = n;
  // M1^(n t2) M2(L1^n / M1^n) with deg M2 <= t2
  const auto& F = p1.M.field();
  const Poly Ln = p1.L.pow(n), Mn = p1.M.pow(n);
  inst.H = Poly::zero(F);
  for (std::uint64_t i = 0; i <= deg(p2.M); ++i)
    inst.H = inst.H + (Ln.pow(i) * Mn.pow(p2.t - i)).scale(p2.M.coeff(i));
  inst.twist = n * p1.t * p2.t;
  return finish(std::move(inst));
}

TowerInstance r1_tower(const UnitPair& p, Elem alpha, Elem beta, std::uint64_t n) {
  const auto& F = p.M.field();
  const UnitPair p2{Poly(F, {conj(F, alpha), conj(F, beta)}), Poly(F, {beta, alpha}), F.one(), 1};
  auto inst = unit_tower(p, p2, n);
  inst.family = "R1";
  return inst;
}

TowerInstance r1l1_tower(const Field& F, Elem alpha, Elem beta, Elem gamma, Elem delta, std::uint64_t n) {
  const UnitPair p{Poly(F, {conj(F, gamma), conj(F, delta)}), Poly(F, {delta, gamma}), F.one(), 1};
  auto inst = r1_tower(p, alpha, beta, n);
  inst.family = "R1L1";
  return inst;
}

TowerInstance r1l5_tower(const Field& F, Elem alpha, Elem beta, std::uint64_t n) {
  if (F.p() != 2) throw HypothesisError("characteristic 2 required");
  const Elem o = F.one(), z = F.zero();
  const UnitPair p{Poly(F, {z, o, z, z, o, o}), Poly(F, {o, o, z, z, o}), o, 5};
  auto inst = r1_tower(p, alpha, beta, n);
  inst.family = "R1L5";
  return inst;
}

TowerInstance r3_tower(const UnitPair& p, Elem c, std::uint64_t n) {
  const auto& F = p.M.field();
  if (F.p() != 2) throw HypothesisError("characteristic 2 required");
  if (c == F.zero() || !F.in_subfield(c, F.n() / 2)) throw HypothesisError("c must lie in F_q^*");
  const Elem o = F.one(), z = F.zero();
  // x^3 + x + c with its twisted partner c x^3 + x^2 + 1; scanning this pair is the trace condition
  const UnitPair p2{Poly(F, {o, z, o, c}), Poly(F, {c, o, z, o}), o, 3};
  auto inst = unit_tower(p, p2, n);
  inst.family = "R3";
  return inst;
}

TowerInstance r3l1_tower(const Field& F, Elem alpha, Elem beta, Elem c, std::uint64_t n) {
  const UnitPair p{Poly(F, {conj(F, alpha), conj(F, beta)}), Poly(F, {beta, alpha}), F.one(), 1};
  auto inst = r3_tower(p, c, n);
  inst.family = "R3L1";
  return inst;
}

TowerInstance line_tower(const LinePair& p, const Poly& N, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  check_line_pair(p);
  require_line_target(N);
  TowerInstance inst;
  inst.family = "line";
  inst.kind = TowerKind::line;
  inst.n = n;
  inst.H = homogenize(N, p.L.pow(n), p.M.pow(n));
  inst.twist = n * p.t * deg(N);
  return finish(std::move(inst));
}

TowerInstance fq_r1_tower(const LinePair& p, Elem alpha, Elem beta, std::uint64_t n) {
  const auto& F = p.M.field();
  auto inst = line_tower(p, Poly(F, {beta, alpha}), n);
  inst.family = "FqR1";
  inst.short_range = true;
  return inst;
}

TowerInstance fq_r1l1_tower(const Field& F, Elem alpha, Elem beta, Elem gamma, Elem delta, std::uint64_t n) {
  const LinePair p{Poly(F, {conj(F, gamma), gamma}), Poly(F, {conj(F, delta), delta}), F.one(), 1};
  auto inst = fq_r1_tower(p, alpha, beta, n);
  inst.family = "FqR1L1";
  return inst;
}

TowerInstance fq_rk_tower(const LinePair& p, Elem alpha, Elem beta, Elem gamma, Elem delta, std::uint64_t n,
                          std::uint64_t k) {
  const auto& F = p.M.field();
  if (k < 1) throw std::invalid_argument("k must be positive");
  const Poly N = Poly(F, {beta, alpha}).pow(k).scale(gamma) +
                 Poly(F, {conj(F, beta), conj(F, alpha)}).pow(k).scale(delta);
  if (deg(N) != k || N.is_zero()) throw HypothesisError("H vanishes at the root of M on U_(q+1), since deg N < k");
  auto inst = line_tower(p, N, n);
  inst.family = "FqRk";
  inst.short_range = true;
  return inst;
}

TowerInstance fq_rkl1_tower(const Field& F, Elem beta, Elem theta, Elem delta, std::uint64_t n, std::uint64_t k) {
  const LinePair p{Poly(F, {F.one(), F.one()}), Poly(F, {conj(F, theta), theta}), F.one(), 1};
  auto inst = fq_rk_tower(p, F.one(), beta, F.one(), delta, n, k);
  inst.family = "FqRkL1";
  return inst;
}

RationalMap gbar_map(const Field& F, Elem alpha) {
  const Elem s = F.add(alpha, conj(F, alpha)), nrm = F.mul(alpha, conj(F, alpha));
  return RationalMap(Poly(F, {s, nrm, s, F.one()}), Poly(F, {nrm, s, F.one()}));
}

bool permutes_line(const RationalMap& map) {
  const auto& F = map.field();
  std::vector<ProjectivePoint> dom{ProjectivePoint::infinity()};
  for (auto x : base_line(F)) dom.emplace_back(x);
  std::vector<Point> seen;
  try {
    for (const auto& x : dom) {
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

TowerInstance gbar_tower(const LinePair& p, const Poly& N, Elem alpha) {
  const auto& F = p.M.field();
  if (F.p() != 2) throw HypothesisError("characteristic 2 required");
  if (F.in_subfield(alpha, F.n() / 2)) throw HypothesisError("alpha must lie outside F_q");
  check_line_pair(p);
  require_line_target(N);
  const Elem s = F.add(alpha, conj(F, alpha)), nrm = F.mul(alpha, conj(F, alpha));
  const Poly &L = p.L, &M = p.M;
  const Poly L2 = L * L, M2 = M * M;
  const Poly h1 = L2 * L + (L2 * M).scale(s) + (L * M2).scale(nrm) + (M2 * M).scale(s);
  const Poly h2 = L2 * M + (L * M2).scale(s) + (M2 * M).scale(nrm);
  TowerInstance inst;
  inst.family = "gbar";
  inst.kind = TowerKind::gbar;
  inst.H = homogenize(N, h1, h2);
  inst.twist = 3 * p.t * deg(N);
  inst.gbar_condition = s == F.one();
  return finish(std::move(inst));
}

std::optional<std::uint64_t> tower_exponent(const TowerInstance& inst, std::uint64_t m1) {
  const auto q = half_order(inst.H.field());
  if (m1 < 1 || (q - 1) % m1) return std::nullopt;
  const auto co = (q - 1) / m1;
  std::uint64_t r1 = inst.twist % (q + 1);
  if (r1 == 0) r1 = q + 1;
  for (std::uint64_t j = 0; j < q * q; ++j, r1 += q + 1)
    if (std::gcd(r1, co) == 1) return m1 * r1;
  return std::nullopt;
}

FiniteMapping tower_map(const TowerInstance& inst, std::uint64_t r) {
  const auto& F = inst.H.field();
  const auto q = half_order(F);
  const auto m1 = m1_of(inst, r);
  std::vector<Point> dom;
  for (auto x : F.nonzero()) dom.push_back(x.v);
  return FiniteMapping::tabulate(std::move(dom), [&](Point x) {
    const Elem hx = inst.H(F.pow({x}, i64(q - 1)));
    return F.mul(F.pow({x}, i64(r)), F.pow(hx, i64(m1))).v;
  });
}

CycloForm tower_form(const TowerInstance& inst, std::uint64_t r) {
  const auto q = half_order(inst.H.field());
  const auto m1 = m1_of(inst, r);
  return CycloForm(power_mod_unity(inst.H, m1, q + 1), r, q - 1);
}

std::size_t tower_max_m(const TowerInstance& inst, std::uint64_t r) {
  const auto q = half_order(inst.H.field());
  const auto m1 = std::gcd(r, q - 1);
  if (inst.kind == TowerKind::gbar) return m1;
  if (inst.short_range) return std::min(2 * (q - 1), m1 * (q + 1));
  return m1 * (q + 1);
}

Prediction tower_predict(const TowerInstance& inst, std::uint64_t r, std::size_t m) {
  const auto q = half_order(inst.H.field());
  const auto m1 = m1_of(inst, r);
  const auto hi = tower_max_m(inst, r);
  if (m < 1 || m > hi || (inst.kind == TowerKind::gbar && m != m1))
    throw std::out_of_range("m = " + std::to_string(m) + " outside the range covered by " + inst.family);
  switch (inst.kind) {
    case TowerKind::gbar:
      return {inst.gbar_condition, inst.gbar_condition ? "alpha + alpha^q = 1" : "alpha + alpha^q != 1"};
    case TowerKind::unit: {
      if (m % m1) return {false, "m1 does not divide m"};
      const auto g = std::gcd(inst.n, q + 1);
      if (g != m / m1) return {false, "(n, q+1) = " + std::to_string(g) + " != m/m1"};
      return {true, "(n, q+1) = m/m1"};
    }
    case TowerKind::line: {
      const auto g = std::gcd(inst.n, q - 1);
      if (m == m1) {
        if (g == 1) return {true, "m = m1 and (n, q-1) = 1"};
        return {false, "m = m1 but (n, q-1) = " + std::to_string(g)};
      }
      if (m % m1) return {false, "m1 does not divide m"};
      const auto m2 = m / m1;
      if (m2 == 2) return {false, "x^n is never 2-to-1 on F_q ∪ {inf}"};
      if (g != m2) return {false, "(n, q-1) = " + std::to_string(g) + " != m/m1"};
      if (2 * (q - 1) >= m) return {false, "2(q-1) >= m"};
      return {true, "(n, q-1) = m/m1 >= 3 and 2(q-1) < m"};
    }
  }
  return {};
}

Prediction third_problem_predict(const CycloForm& form, const FiniteMapping& lambda, const FiniteMapping& lambda_bar,
                                 const FiniteMapping& gbar, std::size_t m) {
  const auto& F = form.field();
  const auto dec = decompose(form);
  std::vector<Point> units;
  for (auto a : dec.units) units.push_back(a.v);
  for (auto a : units)
    if (!lambda.defined_at(a)) throw HypothesisError("lambda undefined at " + F.format({a}));
  const auto lam = lambda.restrict_to(units);
  auto S = gbar.domain();
  std::sort(S.begin(), S.end());
  if (lam.image_set() != S) throw HypothesisError("lambda is not onto the domain of gbar");
  for (std::size_t j = 0; j < units.size(); ++j) {
    const Point gy = dec.g.images()[j];
    if (!lambda_bar.defined_at(gy)) throw HypothesisError("lambda_bar undefined at " + F.format({gy}));
    if (lambda_bar.at(gy) != gbar.at(lam.images()[j]))
      throw HypothesisError("square fails to commute at " + F.format({units[j]}));
  }
  std::size_t m3 = 0;
  for (auto alpha : S) {
    const auto fiber = lam.preimage(alpha);
    const auto below = lambda_bar.preimage(gbar.at(alpha)).size();
    if (below == 0 || fiber.size() % below) throw HypothesisError("fiber sizes are not proportional");
    const auto ratio = fiber.size() / below;
    if (m3 == 0) m3 = ratio;
    if (ratio != m3) throw HypothesisError("fiber ratio is not constant");
    if (!check_m_to_1(dec.g.restrict_to(fiber), m3).verdict)
      throw HypothesisError("g is not " + std::to_string(m3) + "-to-1 on a fiber of lambda");
  }
  const auto hi = dec.m1 * m3 * S.size();
  if (m < 1 || m > hi) throw std::out_of_range("m = " + std::to_string(m) + " outside 1.." + std::to_string(hi));
  if (m % (dec.m1 * m3)) return {false, "m1 m3 does not divide m"};
  const auto m2 = m / dec.m1;
  const auto rep = check_m_to_1(gbar, m / (dec.m1 * m3));
  if (!rep.verdict) return {false, "gbar is not " + std::to_string(m / (dec.m1 * m3)) + "-to-1 on S"};
  if (form.s() * (dec.ell % m2) >= m) return {false, "s (ell mod m2) >= m"};
  std::size_t sum = 0;
  for (auto e : rep.exceptional_set) sum += lam.preimage(e).size();
  if (sum != dec.ell % m2) return {false, "exceptional fibers do not add up to ell mod m2"};
  return {true, "all conjuncts hold"};
}

}  // namespace manyone
