#include "manyone/cyclotomic.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace manyone {

namespace {

void require_m(std::size_t m, std::uint64_t hi) {
  if (m < 1 || m > hi)
    throw std::out_of_range("m = " + std::to_string(m) + " outside 1.." + std::to_string(hi));
}

// a * b with exponents folded mod ell.
Poly mulmod(const Poly& a, const Poly& b, std::uint64_t ell) { return reduce_mod_unity(a * b, ell); }

Poly powmod(Poly base, std::uint64_t e, std::uint64_t ell) {
  Poly acc = reduce_mod_unity(Poly::constant(base.field(), base.field().one()), ell);
  base = reduce_mod_unity(base, ell);
  for (; e; e >>= 1) {
    if (e & 1) acc = mulmod(acc, base, ell);
    if (e > 1) base = mulmod(base, base, ell);
  }
  return acc;
}

// g^(s j) ^ t on U_ell, t possibly negative.
Elem unit_pow(const Field& F, std::uint64_t s, std::uint64_t j, std::int64_t t) {
  const std::uint64_t qm1 = F.q() - 1;
  const auto a = (s * j) % qm1;
  const auto b = mod_floor(t, qm1);
  return F.gen_pow(static_cast<std::int64_t>(a * b % qm1));
}

}  // namespace

CycloForm::CycloForm(Poly h, std::uint64_t r, std::uint64_t s) : h_(std::move(h)), r_(r), s_(s) {
  if (!h_.field().valid()) throw std::invalid_argument("polynomial has no field");
  if (r < 1 || s < 1) throw std::invalid_argument("r and s must be positive");
  const std::uint64_t qm1 = field().q() - 1;
  if (qm1 % s) throw HypothesisError("s = " + std::to_string(s) + " does not divide q-1 = " + std::to_string(qm1));
  ell_ = qm1 / s;
  hU_.reserve(ell_);
  for (std::uint64_t j = 0; j < ell_; ++j) {
    const auto a = field().gen_pow(static_cast<std::int64_t>(s * j));
    const auto v = h_(a);
    if (v.v == 0) throw HypothesisError("h vanishes at " + field().format(a) + " in U_" + std::to_string(ell_));
    hU_.push_back(v);
  }
}

Elem CycloForm::operator()(Elem x) const {
  if (x.v == 0) return x;
  const std::uint64_t qm1 = field().q() - 1;
  const std::uint64_t i = field().log(x);
  return field().mul(field().gen_pow(static_cast<std::int64_t>(i * (r_ % qm1) % qm1)), hU_[i % ell_]);
}

FiniteMapping CycloForm::on_units() const {
  const auto& F = field();
  const std::uint64_t qm1 = F.q() - 1;
  std::vector<Point> dom, img;
  dom.reserve(qm1);
  img.reserve(qm1);
  for (std::uint64_t i = 0; i < qm1; ++i) {
    dom.push_back(F.gen_pow(static_cast<std::int64_t>(i)).v);
    img.push_back(F.mul(F.gen_pow(static_cast<std::int64_t>(i * (r_ % qm1) % qm1)), hU_[i % ell_]).v);
  }
  return FiniteMapping(std::move(dom), std::move(img));
}

FiniteMapping CycloForm::on_field() const {
  auto u = on_units();
  std::vector<Point> dom{0}, img{0};
  dom.insert(dom.end(), u.domain().begin(), u.domain().end());
  img.insert(img.end(), u.images().begin(), u.images().end());
  return FiniteMapping(std::move(dom), std::move(img));
}

std::string CycloForm::to_string() const {
  return "q=" + std::to_string(field().q()) + " r=" + std::to_string(r_) + " s=" + std::to_string(s_) +
         " h=" + h_.to_string();
}

CycloDecomposition decompose(const CycloForm& form) {
  const auto& F = form.field();
  CycloDecomposition d;
  d.m1 = std::gcd(form.r(), form.s());
  d.r1 = form.r() / d.m1;
  d.s1 = form.s() / d.m1;
  d.ell = form.ell();
  d.units = F.unity_subgroup(d.ell);
  std::vector<Point> dom, img;
  for (std::uint64_t j = 0; j < d.ell; ++j) {
    const auto a = d.units[j];
    const auto v = F.mul(F.pow(a, static_cast<std::int64_t>(d.r1)), F.pow(form.h_on_units()[j], static_cast<std::int64_t>(d.s1)));
    if (!F.in_unity_subgroup(v, d.ell * d.m1)) throw std::logic_error("g leaves U_(ell m1) at " + F.format(a));
    dom.push_back(a.v);
    img.push_back(v.v);
  }
  d.g = FiniteMapping(std::move(dom), std::move(img));
  const std::uint64_t qm1 = F.q() - 1;
  for (std::uint64_t i = 0; i < qm1; ++i) {
    const auto x = F.gen_pow(static_cast<std::int64_t>(i));
    if (F.pow(form(x), static_cast<std::int64_t>(d.s1)).v != d.g.images()[i % d.ell])
      throw std::logic_error("square fails to commute at " + F.format(x));
  }
  return d;
}

Prediction main_predict(const CycloForm& form, std::size_t m) { return main_predict(form, decompose(form), m); }

Prediction main_predict(const CycloForm& form, const CycloDecomposition& dec, std::size_t m) {
  require_m(m, dec.ell * dec.m1);
  if (m % dec.m1) return {false, "m1 does not divide m"};
  const auto m2 = m / dec.m1;
  if (!check_m_to_1(dec.g, m2).verdict) return {false, "g is not " + std::to_string(m2) + "-to-1 on U_ell"};
  if (form.s() * (dec.ell % m2) >= m) return {false, "s (ell mod m2) >= m"};
  return {true, "all conjuncts hold"};
}

bool fq_bridge(const CycloForm& form, std::size_t m) {
  const auto q = form.field().q();
  require_m(m, q);
  if (m >= 2 && q % m == 0) return false;
  return check_m_to_1(form.on_units(), m).verdict;
}

bool fq_bridge(const Poly& f, std::size_t m) {
  const auto& F = f.field();
  if (f(F.zero()).v != 0) throw HypothesisError("f(0) != 0");
  for (auto x : F.nonzero())
    if (f(x).v == 0) throw HypothesisError("f has the nonzero root " + F.format(x));
  const auto q = F.q();
  require_m(m, q);
  if (m >= 2 && q % m == 0) return false;
  std::vector<Point> dom;
  for (auto x : F.nonzero()) dom.push_back(x.v);
  return check_m_to_1(FiniteMapping::tabulate(std::move(dom), [&](Point x) { return f(Elem{x}).v; }), m).verdict;
}

Prediction small_m_predict(const CycloForm& form, std::size_t m) {
  if (m != 2 && m != 3) throw std::out_of_range("small_m_predict takes m = 2 or 3");
  if (form.s() < 2) throw std::out_of_range("small_m_predict needs s >= 2");
  if (form.ell() < m) throw std::out_of_range("small_m_predict needs ell >= m");
  const auto dec = decompose(form);
  const auto ell = dec.ell;
  const bool g_inj = dec.g.injective();
  const bool g_m = check_m_to_1(dec.g, m).verdict;
  if (m == 2) {
    if (dec.m1 == 1 && ell % 2 == 0 && g_m) return {true, "case 1: m1 = 1, ell even, g 2-to-1"};
    if (dec.m1 == 2 && g_inj) return {true, "case 2: m1 = 2, g 1-to-1"};
    return {false, "no case applies"};
  }
  if (dec.m1 == 1 && ell % 3 == 0 && g_m) return {true, "case 1: m1 = 1, ell = 0 mod 3, g 3-to-1"};
  if (dec.m1 == 1 && ell % 3 == 1 && form.s() == 2 && g_m) return {true, "case 2: m1 = 1, ell = 1 mod 3, s = 2, g 3-to-1"};
  if (dec.m1 == 3 && g_inj) return {true, "case 3: m1 = 3, g 1-to-1"};
  return {false, "no case applies"};
}

Prediction small_ell_predict(const CycloForm& form, std::size_t m) {
  const auto ell = form.ell();
  if (ell != 2 && ell != 3) throw HypothesisError("small_ell_predict needs ell in {2, 3}, got " + std::to_string(ell));
  const auto dec = decompose(form);
  require_m(m, ell * dec.m1);
  const auto& gv = dec.g.images();
  const auto distinct = std::set<Point>(gv.begin(), gv.end()).size();
  if (ell == 2) {
    if (m == dec.m1 && gv[0] != gv[1]) return {true, "case 1: m = m1, g(1) != g(-1)"};
    if (m == 2 * dec.m1 && gv[0] == gv[1]) return {true, "case 2: m = 2 m1, g(1) = g(-1)"};
    return {false, "no case applies"};
  }
  if (m == dec.m1 && distinct == 3) return {true, "case 1: m = m1, g 1-to-1 on U_3"};
  if (m == 2 * dec.m1 && distinct == 2 && form.r() % form.s() == 0)
    return {true, "case 2: m = 2 m1, g 2-to-1 on U_3, s | r"};
  if (m == 3 * dec.m1 && distinct == 1) return {true, "case 3: m = 3 m1, g constant on U_3"};
  return {false, "no case applies"};
}

Prediction monomial_predict(const CycloForm& form, Elem beta, std::int64_t t, std::size_t m) {
  const auto& F = form.field();
  const auto m1 = std::gcd(form.r(), form.s());
  const auto s1 = form.s() / m1, r1 = form.r() / m1;
  const auto ell = form.ell();
  for (std::uint64_t j = 0; j < ell; ++j) {
    const auto lhs = F.pow(form.h_on_units()[j], static_cast<std::int64_t>(s1));
    if (lhs != F.mul(beta, unit_pow(F, form.s(), j, t)))
      throw HypothesisError("h(a)^s1 != beta a^t at a = " + F.format(F.gen_pow(static_cast<std::int64_t>(form.s() * j))));
  }
  require_m(m, ell * m1);
  if (m % m1) return {false, "m1 does not divide m"};
  const auto g = gcd_abs(static_cast<std::int64_t>(r1) + t, static_cast<std::int64_t>(ell));
  if (g != m / m1) return {false, "(r1 + t, ell) = " + std::to_string(g) + " != m/m1"};
  return {true, "(r1 + t, ell) = m/m1"};
}

std::optional<std::pair<Elem, std::int64_t>> infer_monomial(const CycloForm& form) {
  const auto& F = form.field();
  const auto s1 = form.s() / std::gcd(form.r(), form.s());
  const auto ell = form.ell();
  auto hs = [&](std::uint64_t j) { return F.pow(form.h_on_units()[j], static_cast<std::int64_t>(s1)); };
  const Elem beta = hs(0);
  std::int64_t t = 0;
  if (ell > 1) {
    const auto lg = F.log(F.div(hs(1), beta));
    if (lg % form.s()) return std::nullopt;
    t = static_cast<std::int64_t>(lg / form.s());
  }
  for (std::uint64_t j = 0; j < ell; ++j)
    if (hs(j) != F.mul(beta, unit_pow(F, form.s(), j, t))) return std::nullopt;
  return std::make_pair(beta, t);
}

Poly reduce_mod_unity(const Poly& p, std::uint64_t ell) {
  if (ell == 0) throw std::invalid_argument("ell must be positive");
  const auto& F = p.field();
  std::vector<Elem> c(std::min<std::uint64_t>(ell, p.coeffs().size()));
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) c[i % ell] = F.add(c[i % ell], p.coeffs()[i]);
  return Poly(F, std::move(c));
}

bool hd_rootless_criterion(std::uint32_t p, std::uint64_t ell, std::uint64_t d, std::uint64_t e) {
  return std::gcd(d, p * (ell / std::gcd(e, ell))) == 1;
}

bool hd_rootless_scan(const Field& field, std::uint64_t ell, std::uint64_t d, std::uint64_t e) {
  for (auto a : field.unity_subgroup(ell)) {
    const auto b = field.pow(a, static_cast<std::int64_t>(e % ell));
    Elem acc = field.zero(), pw = field.one();
    for (std::uint64_t i = 0; i < d; ++i) {
      acc = field.add(acc, pw);
      pw = field.mul(pw, b);
    }
    if (acc.v == 0) return false;
  }
  return true;
}

namespace {

std::uint64_t base_order(const HdFamily& fam) {
  if (!fam.field.valid()) throw std::invalid_argument("family has no field");
  if (fam.n == 0 || fam.field.n() % fam.n)
    throw HypothesisError("extension degree " + std::to_string(fam.n) + " does not divide " + std::to_string(fam.field.n()));
  return ipow(fam.field.p(), fam.field.n() / fam.n);
}

}  // namespace

CycloForm hd_form(const HdFamily& fam) {
  base_order(fam);
  const auto& F = fam.field;
  const std::uint64_t qm1 = F.q() - 1;
  if (fam.ell * fam.s != qm1) throw HypothesisError("ell s != q^n - 1");
  if (fam.d < 1 || fam.e < 1 || fam.k < 1) throw std::invalid_argument("d, e and k must be positive");
  const auto ell = fam.ell;
  // sum_{i<d} x^(e i), folded mod ell
  auto geometric_e = [&](std::uint64_t d) {
    std::vector<Elem> c(std::min<std::uint64_t>(ell, d * fam.e));
    for (std::uint64_t i = 0; i < d; ++i) {
      auto& slot = c[(fam.e * i) % ell];
      slot = F.add(slot, F.one());
    }
    return Poly(F, std::move(c));
  };
  Poly h = powmod(geometric_e(fam.d), fam.t, ell);
  if (fam.H) {
    if (!fam.H->field().same(F)) throw std::invalid_argument("H lives over a different field");
    const unsigned sub = F.n() / fam.n;
    for (auto c : fam.H->coeffs())
      if (!F.in_subfield(c, sub)) throw HypothesisError("H has a coefficient outside F_q: " + F.format(c));
    const auto ell0 = ell / std::gcd(ell, fam.k - 1);
    const Poly inner = powmod(geometric_e(fam.k), ell0, ell);
    Poly acc = Poly::zero(F);
    const auto& hc = fam.H->coeffs();
    for (auto it = hc.rbegin(); it != hc.rend(); ++it) acc = mulmod(acc, inner, ell) + Poly::constant(F, *it);
    h = mulmod(h, acc, ell);
  }
  return CycloForm(std::move(h), fam.r, fam.s);
}

Prediction hd_family_predict(const HdFamily& fam, std::size_t m) {
  const auto q = base_order(fam);
  const auto form = hd_form(fam);
  const auto m1 = std::gcd(fam.r, fam.s);
  const auto lm = fam.ell * m1;
  require_m(m, lm);
  if ((q - 1) % lm == 0 && fam.n % lm == 0) {
    if (m == m1) return {true, "q-1 case: f is m1-to-1"};
    return {false, "q-1 case: f is m1-to-1 and m != m1"};
  }
  if (fam.n % 2 == 0 && (q + 1) % lm == 0) {
    if (fam.s % (q - 1)) throw HypothesisError("q-1 does not divide s");
    if (m % m1) return {false, "q+1 case: m1 does not divide m"};
    const auto shift = (1 - static_cast<std::int64_t>(fam.d)) * static_cast<std::int64_t>(fam.e) *
                       static_cast<std::int64_t>(fam.t) * static_cast<std::int64_t>(fam.s / (q - 1));
    const auto g = gcd_abs(static_cast<std::int64_t>(lm), static_cast<std::int64_t>(fam.r) + shift);
    if (g != m) return {false, "q+1 case: gcd is " + std::to_string(g)};
    return {true, "q+1 case: gcd equals m"};
  }
  throw HypothesisError("neither ell m1 | (q-1, n) nor (n even and ell m1 | q+1)");
}

namespace {

CycloForm multiply_in(const CycloForm& f, const Poly& M, std::uint64_t t, std::uint64_t k) {
  if (!M.field().same(f.field())) throw std::invalid_argument("M lives over a different field");
  const auto ell = f.ell();
  Poly h = mulmod(powmod(M, k, ell), f.h(), ell);
  return CycloForm(std::move(h), f.r() + k * t, f.s());
}

}  // namespace

LiftedFamily lift_from_permutation(const CycloForm& f, const Poly& M, Elem eps, std::uint64_t t, std::uint64_t k) {
  const auto& F = f.field();
  if (!f.on_field().injective()) throw HypothesisError("f does not permute F_q");
  if (!F.in_unity_subgroup(eps, f.ell())) throw HypothesisError("eps is not in U_ell");
  for (auto a : F.unity_subgroup(f.ell())) {
    const auto v = F.mul(F.mul(eps, F.pow(a, static_cast<std::int64_t>(t % f.ell()))),
                         F.pow(M(a), static_cast<std::int64_t>(f.s())));
    if (v != F.one()) throw HypothesisError("eps x^t M(x)^s != 1 at " + F.format(a));
  }
  LiftedFamily out{multiply_in(f, M, t, k), std::gcd(f.r() + k * t, f.s())};
  if (!check_m_to_1(out.F.on_units(), out.multiplicity).verdict)
    throw std::logic_error("lifted map is not " + std::to_string(out.multiplicity) + "-to-1");
  return out;
}

CycloForm transfer_family(const CycloForm& f, const Poly& M, Elem eps, std::uint64_t t, std::uint64_t k) {
  const auto& F = f.field();
  const auto m1 = std::gcd(f.r(), f.s());
  if (t % m1) throw HypothesisError("(r, s) does not divide t");
  if (std::gcd(f.r() + k * t, f.s()) != m1) throw HypothesisError("(r + kt, s) != (r, s)");
  if (!F.in_unity_subgroup(eps, f.ell() * m1)) throw HypothesisError("eps is not in U_(ell m1)");
  for (auto a : F.unity_subgroup(f.ell())) {
    const auto v = F.mul(F.mul(eps, F.pow(a, static_cast<std::int64_t>((t / m1) % f.ell()))),
                         F.pow(M(a), static_cast<std::int64_t>(f.s() / m1)));
    if (v != F.one()) throw HypothesisError("eps x^(t/m1) M(x)^(s/m1) != 1 at " + F.format(a));
  }
  return multiply_in(f, M, t, k);
}

}  // namespace manyone
