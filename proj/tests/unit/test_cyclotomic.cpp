#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "../support/cyclo_models.hpp"
#include "manyone/cyclotomic.hpp"

using namespace manyone;
using namespace manyone::testing;

namespace {

std::set<Point> as_set(const std::vector<Point>& v) { return {v.begin(), v.end()}; }

std::size_t brute(const CycloForm& f, std::size_t m) { return check_m_to_1(direct_units(f), m).verdict; }

}  // namespace

TEST(Cyclotomic, DecomposeMonomial) {
  auto F = Field::build(13, 1);
  for (std::uint64_t s : {1, 2, 3, 4, 6, 12})
    for (std::uint64_t r = 1; r <= 12; ++r) {
      CycloForm f(Poly::constant(F, F.one()), r, s);
      auto d = decompose(f);
      const auto e = r / std::gcd(r, s);
      for (std::size_t i = 0; i < d.units.size(); ++i)
        EXPECT_EQ(d.g.images()[i], F.pow(d.units[i], static_cast<std::int64_t>(e)).v);
    }
}

TEST(Cyclotomic, RejectsBadForms) {
  auto F = Field::build(13, 1);
  EXPECT_THROW(CycloForm(Poly::constant(F, F.one()), 1, 5), HypothesisError);
  // x - 1 vanishes at 1 in every U_ell
  EXPECT_THROW(CycloForm(Poly::parse(F, "12,1"), 1, 4), HypothesisError);
  EXPECT_THROW(CycloForm(Poly::constant(F, F.one()), 0, 4), std::invalid_argument);
}

TEST(Cyclotomic, F29Example) {
  auto F = Field::build(29, 1);
  CycloForm f(Poly::parse(F, "1,0,0,15,1,1"), 2, 4);
  auto d = decompose(f);
  EXPECT_EQ(d.m1, 2u);
  EXPECT_EQ(d.ell, 7u);
  std::set<Point> u7;
  for (auto a : d.units) u7.insert(a.v);
  EXPECT_EQ(u7, (std::set<Point>{1, 7, 16, 20, 23, 24, 25}));
  EXPECT_TRUE(check_m_to_1(d.g, 6).verdict);
  EXPECT_TRUE(main_predict(f, 12).verdict);
  auto rep = check_m_to_1(direct_units(f), 12);
  ASSERT_TRUE(rep.verdict);
  EXPECT_EQ(as_set(rep.exceptional_set), (std::set<Point>{1, 28, 12, 17}));
}

TEST(Cyclotomic, F64Example) {
  auto F = Field::build(2, 6, std::vector<std::uint32_t>{1, 1, 0, 1, 1, 0, 1});
  EXPECT_EQ(F.primitive().v, 2u);
  const Elem xi9 = F.gen_pow(9);
  CycloForm f(Poly(F, {xi9, F.one()}), 2, 21);
  auto d = decompose(f);
  for (auto v : d.g.images()) EXPECT_EQ(v, 1u);
  EXPECT_TRUE(small_ell_predict(f, 3).verdict);
  EXPECT_TRUE(main_predict(f, 3).verdict);
  EXPECT_TRUE(brute(f, 3));
}

TEST(Cyclotomic, PermutationCaseMatchesClassicalCriterion) {
  std::mt19937_64 rng(11);
  for (const auto& F : grid_fields()) {
    const auto qm1 = F.q() - 1;
    for (auto s : divisors(qm1))
      for (std::uint64_t r = 1; r <= 2 * s; ++r) {
        auto f = random_form(rng, F, r, s);
        if (!f) continue;
        // (r, s) = 1 and x^r h(x)^s permutes U_ell
        std::set<Point> img;
        for (auto a : F.unity_subgroup(f->ell()))
          img.insert(F.mul(F.pow(a, static_cast<std::int64_t>(r)), F.pow(f->h()(a), static_cast<std::int64_t>(s))).v);
        const bool classical = std::gcd(r, s) == 1 && img.size() == f->ell();
        EXPECT_EQ(main_predict(*f, 1).verdict, classical) << f->to_string();
      }
  }
}

TEST(Cyclotomic, MainPredictSoundnessGrid) {
  std::mt19937_64 rng(12);
  std::size_t checked = 0, positives = 0;
  for (const auto& F : grid_fields()) {
    const auto qm1 = F.q() - 1;
    for (auto s : divisors(qm1))
      for (std::uint64_t r = 1; r <= 2 * s; ++r)
        for (int rep = 0; rep < 2; ++rep) {
          auto f = random_form(rng, F, r, s);
          if (!f) continue;
          auto dec = decompose(*f);
          auto direct = direct_units(*f);
          for (std::size_t m = 1; m <= std::min<std::uint64_t>(dec.ell * dec.m1, 16); ++m) {
            const bool want = check_m_to_1(direct, m).verdict;
            ASSERT_EQ(main_predict(*f, dec, m).verdict, want) << f->to_string() << " m=" << m;
            ++checked;
            positives += want;
          }
        }
  }
  EXPECT_GT(checked, 1000u);
  EXPECT_GT(positives, 100u);
}

TEST(Cyclotomic, MainPredictRange) {
  auto F = Field::build(13, 1);
  CycloForm f(Poly::constant(F, F.one()), 2, 4);  // ell = 3, m1 = 2
  EXPECT_THROW(main_predict(f, 0), std::out_of_range);
  EXPECT_THROW(main_predict(f, 7), std::out_of_range);
  EXPECT_NO_THROW(main_predict(f, 6));
}

TEST(Cyclotomic, SpecializationsAgreeWithMain) {
  std::mt19937_64 rng(13);
  std::size_t small_m = 0, small_ell = 0;
  for (const auto& F : grid_fields()) {
    const auto qm1 = F.q() - 1;
    for (auto s : divisors(qm1))
      for (std::uint64_t r = 1; r <= 2 * s; ++r)
        for (int rep = 0; rep < 3; ++rep) {
          auto f = random_form(rng, F, r, s, rep == 0 ? 1 : 5);
          if (!f) continue;
          for (std::size_t m : {2, 3})
            if (s >= 2 && f->ell() >= m) {
              EXPECT_EQ(small_m_predict(*f, m).verdict, main_predict(*f, m).verdict) << f->to_string();
              ++small_m;
            }
          if (f->ell() == 2 || f->ell() == 3) {
            const auto m1 = std::gcd(r, s);
            for (std::size_t m = 1; m <= f->ell() * m1; ++m) {
              EXPECT_EQ(small_ell_predict(*f, m).verdict, main_predict(*f, m).verdict) << f->to_string() << " m=" << m;
              ++small_ell;
            }
          }
        }
  }
  EXPECT_GT(small_m, 500u);
  EXPECT_GT(small_ell, 500u);
}

TEST(Cyclotomic, SmallCaseTrivialities) {
  auto F = Field::build(13, 1);
  // m1 = 1 with ell = 3 odd: no 2-to-1 case
  CycloForm odd(Poly::parse(F, "2,1"), 1, 4);
  EXPECT_FALSE(small_m_predict(odd, 2).verdict);
  // ell = 5 = 2 mod 3 with m1 = 1: no 3-to-1 case
  auto F11 = Field::build(11, 1);
  CycloForm two(Poly::parse(F11, "3,1"), 1, 2);
  EXPECT_FALSE(small_m_predict(two, 3).verdict);
  EXPECT_THROW(small_m_predict(two, 4), std::out_of_range);
}

TEST(Cyclotomic, SmallEllRejectsOtherEll) {
  auto F = Field::build(13, 1);
  CycloForm f(Poly::constant(F, F.one()), 1, 3);  // ell = 4
  EXPECT_THROW(small_ell_predict(f, 1), HypothesisError);
}

// The s | r conjunct of the ell = 3 case list, checked against brute force on every ell = 3 form.
TEST(Cyclotomic, EllThreeDivisibilityConjunct) {
  std::mt19937_64 rng(14);
  std::size_t with = 0, without = 0;
  for (const auto& F : grid_fields()) {
    const auto qm1 = F.q() - 1;
    if (qm1 % 3) continue;
    const auto s = qm1 / 3;
    for (std::uint64_t r = 1; r <= 2 * s; ++r)
      for (int rep = 0; rep < 30; ++rep) {
        auto f = random_form(rng, F, r, s, 2);
        if (!f) continue;
        auto d = decompose(*f);
        const auto& gv = d.g.images();
        if (std::set<Point>(gv.begin(), gv.end()).size() != 2) continue;
        const bool truth = brute(*f, 2 * d.m1);
        EXPECT_EQ(truth, r % s == 0) << f->to_string();
        (r % s == 0 ? with : without)++;
      }
  }
  EXPECT_GT(with, 0u);
  EXPECT_GT(without, 0u);
}

// f = x^r (x^(2s) + x^s + a) on F_13, s = 4.
TEST(Cyclotomic, QuadraticUnitCorollary) {
  auto F = Field::build(13, 1);
  const Elem w = F.gen_pow(4);
  for (std::uint64_t r = 1; r <= 24; ++r)
    for (std::uint32_t av = 0; av < 13; ++av) {
      const Elem a{av};
      if (a == F.one() || a == F.from_int(-2)) continue;
      CycloForm f(Poly(F, {a, F.one(), F.one()}), r, 4);
      const auto base = F.mul(F.pow(F.sub(a, F.one()), 5), F.add(a, F.from_int(2)));
      const auto v = F.pow(base, 2);
      const bool cond = std::gcd<std::uint64_t>(r, 4) == 2 && (r % 6 == 2 || r % 6 == 4) && v != w &&
                        v != F.mul(w, w);
      EXPECT_EQ(cond, brute(f, 2)) << "r=" << r << " a=" << av;
      EXPECT_EQ(small_m_predict(f, 2).verdict, cond);
    }
}

// f = x^r (x^6 + a) on F_13.
TEST(Cyclotomic, HalfUnitCorollary) {
  auto F = Field::build(13, 1);
  const auto minus1 = F.from_int(-1);
  for (std::uint64_t r = 1; r <= 24; ++r)
    for (std::uint32_t av = 0; av < 13; ++av) {
      const Elem a{av};
      if (a == F.one() || a == minus1) continue;
      CycloForm f(Poly(F, {a, F.one()}), r, 6);
      const auto g6 = std::gcd<std::uint64_t>(r, 6);
      const auto sign = [&](std::uint64_t e) { return e % 2 ? minus1 : F.one(); };
      bool cond = false;
      if (g6 == 1) cond = F.pow(F.sub(F.mul(a, a), F.one()), 6) == sign(r);
      if (g6 == 2) cond = F.pow(F.div(F.add(a, F.one()), F.sub(a, F.one())), 3) != sign(r / 2);
      EXPECT_EQ(cond, brute(f, 2)) << "r=" << r << " a=" << av;
      EXPECT_EQ(small_ell_predict(f, 2).verdict, cond);
    }
}

TEST(Cyclotomic, FqBridge) {
  std::mt19937_64 rng(15);
  for (const auto& F : grid_fields()) {
    for (auto s : divisors(F.q() - 1)) {
      auto f = random_form(rng, F, 1 + rng() % (2 * s), s);
      if (!f) continue;
      auto full = f->on_field();
      for (std::size_t m = 1; m <= F.q(); ++m) EXPECT_EQ(fq_bridge(*f, m), check_m_to_1(full, m).verdict);
    }
  }
  auto F5 = Field::build(5, 1);
  EXPECT_THROW(fq_bridge(Poly::parse(F5, "0,1,0,1"), 2), HypothesisError);
  auto F29 = Field::build(29, 1);
  auto x4 = Poly::monomial(F29, F29.one(), 4);
  EXPECT_TRUE(fq_bridge(x4, 4));
  EXPECT_FALSE(fq_bridge(x4, 3));
}

TEST(Cyclotomic, MonomialPowerCorollary) {
  std::mt19937_64 rng(16);
  for (const auto& F : grid_fields()) {
    const auto qm1 = F.q() - 1;
    for (auto s : divisors(qm1))
      for (std::uint64_t r = 1; r <= 2 * s; r += 1 + rng() % 3) {
        auto H = random_form(rng, F, 1, s, 3);
        if (!H) continue;
        const auto m1 = std::gcd(r, s);
        CycloForm f(H->h().pow(H->ell() * m1), r, s);
        for (std::size_t m = 1; m <= std::min<std::uint64_t>(f.ell() * m1, 16); ++m) {
          const bool pred = monomial_predict(f, F.one(), 0, m).verdict;
          EXPECT_EQ(pred, m % m1 == 0 && std::gcd<std::uint64_t>(r, f.ell() * m1) == m);
          EXPECT_EQ(pred, brute(f, m)) << f.to_string() << " m=" << m;
        }
      }
  }
}

// f = x^r (x^(d(q-1)) - a)^(k m1) over F_(q^2).
TEST(Cyclotomic, QuadraticExtensionFamily) {
  std::size_t instances = 0;
  for (std::uint32_t qb : {2, 3, 4, 5, 7}) {
    const auto p = static_cast<std::uint32_t>(prime_factors(qb).front());
    unsigned e = 0;
    for (auto t = qb; t > 1; t /= p) ++e;
    auto F = Field::build(p, 2 * e);
    const std::uint64_t qm1 = qb - 1, qp1 = qb + 1;
    for (auto a : F.unity_subgroup(qp1))
      for (std::uint64_t d = 1; d <= 4; ++d)
        for (std::uint64_t r = 1; r <= 2 * qm1 + 2; ++r)
          for (std::uint64_t k = 1; k <= 2; ++k) {
            const auto m1 = std::gcd(r, qm1);
            const auto tt = qp1 / std::gcd(d, qp1);
            Poly M = Poly::monomial(F, F.one(), d) - Poly::constant(F, a);
            if (F.pow(a, static_cast<std::int64_t>(tt)) == F.one()) {
              EXPECT_THROW(CycloForm(M.pow(k * m1), r, qm1), HypothesisError);
              continue;
            }
            CycloForm f(M.pow(k * m1), r, qm1);
            const Elem beta = F.pow(F.neg(a), -static_cast<std::int64_t>(k));
            const auto r1 = static_cast<std::int64_t>(r / m1);
            for (std::size_t m = 1; m <= std::min<std::uint64_t>(qp1 * m1, 16); ++m) {
              const bool formula = m % m1 == 0 && gcd_abs(r1 - static_cast<std::int64_t>(k * d), qp1) == m / m1;
              EXPECT_EQ(monomial_predict(f, beta, -static_cast<std::int64_t>(k * d), m).verdict, formula);
              EXPECT_EQ(formula, brute(f, m)) << f.to_string() << " m=" << m;
              ++instances;
            }
          }
  }
  EXPECT_GT(instances, 1000u);
}

TEST(Cyclotomic, F25Examples) {
  auto F = Field::build(5, 2);
  // x^17 + x = x (x^16 + 1)
  CycloForm f(Poly::parse(F, "1,0,0,0,1"), 1, 4);
  EXPECT_TRUE(brute(f, 3));
  EXPECT_TRUE(main_predict(f, 3).verdict);
  std::size_t seen = 0;
  for (auto a : F.unity_subgroup(6)) {
    if (F.pow(a, 2) == F.one()) continue;
    // x^13 - a x = x (x^12 - a)
    CycloForm g(Poly(F, {F.neg(a), F.zero(), F.zero(), F.one()}), 1, 4);
    EXPECT_TRUE(brute(g, 2));
    EXPECT_TRUE(monomial_predict(g, F.inv(F.neg(a)), -3, 2).verdict);
    ++seen;
  }
  EXPECT_EQ(seen, 4u);
}

TEST(Cyclotomic, InferMonomial) {
  auto F = Field::build(5, 2);
  CycloForm f(Poly::parse(F, "1,0,0,0,1"), 1, 4);
  auto bt = infer_monomial(f);
  ASSERT_TRUE(bt.has_value());
  for (std::size_t m = 1; m <= 6; ++m)
    EXPECT_EQ(monomial_predict(f, bt->first, bt->second, m).verdict, brute(f, m));
}

// Perturbing h either breaks the monomial hypothesis or keeps the verdict truthful.
TEST(Cyclotomic, MonomialHypothesisMutation) {
  std::mt19937_64 rng(17);
  auto F = Field::build(7, 2);
  std::size_t rejected = 0;
  for (int it = 0; it < 300; ++it) {
    const std::uint64_t d = 1 + rng() % 4;
    auto a = F.unity_subgroup(8)[rng() % 8];
    Poly M = Poly::monomial(F, F.one(), d) - Poly::constant(F, a);
    const std::uint64_t r = 1 + rng() % 12;
    const auto m1 = std::gcd<std::uint64_t>(r, 6);
    std::vector<Elem> c = M.pow(m1).coeffs();
    c[rng() % c.size()] = {static_cast<std::uint32_t>(rng() % F.q())};
    std::optional<CycloForm> f;
    try {
      f.emplace(Poly(F, c), r, 6);
    } catch (const HypothesisError&) {
      continue;
    }
    const Elem beta = F.inv(F.neg(a));
    for (std::size_t m = 1; m <= 8 * m1 && m <= 16; ++m) {
      try {
        EXPECT_EQ(monomial_predict(*f, beta, -static_cast<std::int64_t>(d), m).verdict, brute(*f, m));
      } catch (const HypothesisError&) {
        ++rejected;
        break;
      }
    }
  }
  EXPECT_GT(rejected, 0u);
}

TEST(Cyclotomic, HdRootLemma) {
  for (auto [p, n] : std::vector<std::pair<unsigned, unsigned>>{
           {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {11, 1}, {13, 1}, {2, 4}, {17, 1}, {19, 1},
           {23, 1}, {5, 2}, {3, 3}, {29, 1}, {31, 1}, {2, 5}, {37, 1}, {41, 1}, {43, 1}, {47, 1}, {7, 2},
           {53, 1}, {59, 1}, {61, 1}, {2, 6}}) {
    auto F = Field::build(p, n);
    for (auto ell : divisors(F.q() - 1))
      for (std::uint64_t d = 1; d <= 12; ++d)
        for (std::uint64_t e = 1; e <= 12; ++e)
          ASSERT_EQ(hd_rootless_criterion(p, ell, d, e), hd_rootless_scan(F, ell, d, e))
              << "q=" << F.q() << " ell=" << ell << " d=" << d << " e=" << e;
  }
  auto F16 = Field::build(2, 4);
  EXPECT_TRUE(hd_rootless_criterion(2, 5, 3, 1));
  EXPECT_TRUE(hd_rootless_scan(F16, 5, 3, 1));
  auto F7 = Field::build(7, 1);
  EXPECT_FALSE(hd_rootless_scan(F7, 1, 7, 1));  // h_7(1) = 7 = 0
}

TEST(Cyclotomic, HdFamilyGrid) {
  struct Ext {
    unsigned p, N, n;
  };
  std::size_t compared = 0, errors = 0;
  std::mt19937_64 rng(18);
  for (auto ext : std::vector<Ext>{{3, 2, 2}, {2, 4, 2}, {5, 2, 2}, {7, 2, 2}, {2, 6, 2}, {2, 6, 3}, {3, 4, 4},
                                   {3, 4, 2}}) {
    auto F = Field::build(ext.p, ext.N);
    const std::uint64_t qb = ipow(ext.p, ext.N / ext.n);
    for (auto ell : divisors(F.q() - 1)) {
      const auto s = (F.q() - 1) / ell;
      for (std::uint64_t r = 1; r <= 12; ++r) {
        const auto lm = ell * std::gcd(r, s);
        const bool qm = (qb - 1) % lm == 0 && ext.n % lm == 0;
        const bool qp = ext.n % 2 == 0 && (qb + 1) % lm == 0;
        if (!qm && !qp) continue;
        for (int rep = 0; rep < 4; ++rep) {
          HdFamily fam{F, ext.n, ell, s, r, 1 + rng() % 6, 1 + rng() % 4, 1 + rng() % 3, std::nullopt, 1};
          if (rep >= 2) {
            const auto sub = F.subfield(ext.N / ext.n);
            std::vector<Elem> hc{sub[rng() % sub.size()], sub[rng() % sub.size()], F.one()};
            fam.H = Poly(F, hc);
            fam.k = 1 + rng() % 3;
          }
          std::optional<CycloForm> f;
          try {
            f.emplace(hd_form(fam));
          } catch (const HypothesisError&) {
            ++errors;
            continue;
          }
          auto direct = direct_units(*f);
          for (std::size_t m = 1; m <= lm; ++m) {
            ASSERT_EQ(hd_family_predict(fam, m).verdict, check_m_to_1(direct, m).verdict)
                << "q^n=" << F.q() << " ell=" << ell << " r=" << r << " m=" << m;
            ++compared;
          }
        }
      }
    }
  }
  EXPECT_GT(compared, 300u);
}

TEST(Cyclotomic, HdFamilyRejectsUncoveredParameters) {
  auto F = Field::build(3, 2);
  HdFamily fam{F, 2, 8, 1, 1, 2, 1, 1, std::nullopt, 1};
  EXPECT_THROW(hd_family_predict(fam, 1), HypothesisError);
}

TEST(Cyclotomic, LiftConstantM) {
  auto F = Field::build(3, 2);
  CycloForm f(Poly::constant(F, F.one()), 1, 2);  // x permutes F_9
  for (auto c : F.nonzero()) {
    const Elem eps = F.inv(F.pow(c, 2));
    if (!F.in_unity_subgroup(eps, f.ell())) continue;
    auto lifted = lift_from_permutation(f, Poly::constant(F, c), eps, 0, 1);
    EXPECT_EQ(lifted.multiplicity, 1u);
    EXPECT_TRUE(lifted.F.on_field().injective());
  }
}

// M = c x^j H(x)^ell gives eps x^t M^s = 1 on U_ell with t = -js mod ell, eps = c^(-s).
TEST(Cyclotomic, LiftAndTransferInstances) {
  std::mt19937_64 rng(19);
  std::size_t lifts = 0, transfers = 0;
  for (const auto& F : {Field::build(3, 2), Field::build(13, 1), Field::build(2, 4), Field::build(5, 2)}) {
    const auto qm1 = F.q() - 1;
    for (auto s : divisors(qm1)) {
      const auto ell = qm1 / s;
      for (int it = 0; it < 40; ++it) {
        auto f = random_form(rng, F, 1 + rng() % (2 * s), s, 3);
        auto H = random_form(rng, F, 1, s, 2);
        if (!f || !H) continue;
        const Elem c = F.gen_pow(static_cast<std::int64_t>(rng() % qm1));
        const std::uint64_t j = rng() % 4, k = 1 + rng() % 3;
        const auto m1 = std::gcd(f->r(), s);
        if (f->on_field().injective()) {
          Poly M = H->h().pow(ell) * Poly::monomial(F, c, j);
          const std::uint64_t t = (ell - (j * s) % ell) % ell + ell * (rng() % 2);
          auto lifted = lift_from_permutation(*f, M, F.inv(F.pow(c, static_cast<std::int64_t>(s))), t, k);
          EXPECT_EQ(lifted.multiplicity, std::gcd(f->r() + k * t, s));
          EXPECT_TRUE(check_m_to_1(direct_units(lifted.F), lifted.multiplicity).verdict);
          ++lifts;
        }
        const auto s1 = s / m1;
        Poly M = H->h().pow(ell * m1) * Poly::monomial(F, c, j);
        const std::uint64_t t = m1 * ((ell - (j * s1) % ell) % ell + ell * (rng() % 2));
        const Elem eps = F.inv(F.pow(c, static_cast<std::int64_t>(s1)));
        if (std::gcd(f->r() + k * t, s) != m1) {
          EXPECT_THROW(transfer_family(*f, M, eps, t, k), HypothesisError);
          continue;
        }
        auto G = transfer_family(*f, M, eps, t, k);
        auto df = direct_units(*f), dG = direct_units(G);
        for (std::size_t m = 1; m <= ell * m1; ++m)
          EXPECT_EQ(check_m_to_1(dG, m).verdict, check_m_to_1(df, m).verdict) << f->to_string() << " m=" << m;
        ++transfers;
      }
    }
  }
  EXPECT_GT(lifts, 20u);
  EXPECT_GT(transfers, 50u);
}

TEST(Cyclotomic, LiftRejectsNonPermutation) {
  auto F = Field::build(13, 1);
  CycloForm f(Poly::constant(F, F.one()), 2, 4);
  EXPECT_THROW(lift_from_permutation(f, Poly::constant(F, F.one()), F.one(), 0, 1), HypothesisError);
  CycloForm id(Poly::constant(F, F.one()), 1, 4);
  EXPECT_THROW(lift_from_permutation(id, Poly::constant(F, F.from_int(2)), F.one(), 0, 1), HypothesisError);
}
