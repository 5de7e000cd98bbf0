#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "manyone/galois.hpp"
#include "manyone/poly.hpp"

using namespace manyone;

namespace {

// Schoolbook multiplication of coordinate vectors modulo the defining polynomial.
std::vector<std::uint32_t> slow_mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                    const std::vector<std::uint32_t>& mod, std::uint32_t p) {
  const auto n = mod.size() - 1;
  std::vector<std::uint64_t> prod(2 * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  for (std::size_t d = 2 * n - 1; d >= n; --d) {
    auto c = prod[d];
    if (!c) continue;
    for (std::size_t i = 0; i <= n; ++i) prod[d - n + i] = (prod[d - n + i] + (p - c) * mod[i]) % p;
  }
  return {prod.begin(), prod.begin() + static_cast<long>(n)};
}

const std::vector<std::pair<std::uint32_t, std::uint32_t>> kSmallFields = {
    {2, 1}, {3, 1}, {5, 1}, {7, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 2}, {5, 2}, {3, 3}, {2, 6}, {7, 2}};

}  // namespace

TEST(Galois, PrimeFieldDefaults) {
  auto f = Field::build(5, 1);
  EXPECT_EQ(f.spec().modulus, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(f.q(), 5u);
  EXPECT_EQ(f.primitive().v, 2u);
  EXPECT_EQ(Field::build(2, 1).primitive().v, 1u);
}

TEST(Galois, PrimitiveOfGF5ByDirectOrders) {
  // order of a mod 5 computed by repeated multiplication
  std::uint32_t best = 0;
  for (std::uint32_t a = 2; a < 5 && !best; ++a) {
    std::uint32_t x = a, ord = 1;
    while (x != 1) x = x * a % 5, ++ord;
    if (ord == 4) best = a;
  }
  EXPECT_EQ(Field::build(5, 1).primitive().v, best);
}

TEST(Galois, F4DefaultModulus) {
  EXPECT_EQ(Field::build(2, 2).spec().modulus, (std::vector<std::uint32_t>{1, 1, 1}));
}

TEST(Galois, F64WithGivenModulusHasXPrimitive) {
  auto f = Field::build(2, 6, std::vector<std::uint32_t>{1, 1, 0, 1, 1, 0, 1});
  Elem xi = f.from_coeffs({0, 1});
  EXPECT_EQ(f.primitive(), xi);
  EXPECT_EQ(f.pow(xi, 63), f.one());
  EXPECT_NE(f.pow(xi, 21), f.one());
  EXPECT_NE(f.pow(xi, 9), f.one());
  // xi^6 + xi^4 + xi^3 + xi + 1 = 0
  Elem s = f.one();
  for (int e : {6, 4, 3, 1}) s = f.add(s, f.pow(xi, e));
  EXPECT_EQ(s, f.zero());
}

TEST(Galois, RejectsBadInput) {
  EXPECT_THROW(Field::build(4, 1), ParseError);
  EXPECT_THROW(Field::build(2, 2, std::vector<std::uint32_t>{1, 0, 1}), ParseError);  // (x+1)^2
  EXPECT_THROW(Field::build(2, 3, std::vector<std::uint32_t>{1, 1, 1}), ParseError);
  EXPECT_THROW(Field::build(2, 17), ScaleError);
  EXPECT_THROW(Field::build(257, 2), ScaleError);
  EXPECT_NO_THROW(Field::build(2, 16));
}

TEST(Galois, ParsesFieldSpecStrings) {
  auto f = Field::parse("2^6/1,1,0,1,1,0,1");
  EXPECT_EQ(f.spec().modulus, (std::vector<std::uint32_t>{1, 1, 0, 1, 1, 0, 1}));
  EXPECT_EQ(Field::parse("29^1").q(), 29u);
  EXPECT_EQ(Field::parse("3^2").q(), 9u);
  EXPECT_THROW(Field::parse("29"), ParseError);
  EXPECT_THROW(Field::parse("2^x"), ParseError);
  EXPECT_THROW(Field::parse("2^2/1,1"), ParseError);
  EXPECT_EQ(Field::parse("2^4").spec().to_string(), "2^4/1,1,0,0,1");
}

TEST(Galois, DefaultModulusIsSmallestIrreducible) {
  for (auto [p, n] : kSmallFields) {
    auto mod = Field::build(p, n).spec().modulus;
    // every monic degree-n candidate with a smaller encoding must be reducible
    std::uint64_t enc = 0;
    for (std::size_t i = n; i-- > 0;) enc = enc * p + mod[i];
    for (std::uint64_t low = 0; low < enc; ++low) {
      std::vector<std::uint32_t> g(n + 1);
      auto v = low;
      for (std::uint32_t i = 0; i < n; ++i) g[i] = v % p, v /= p;
      g[n] = 1;
      EXPECT_FALSE(is_irreducible(p, g));
    }
  }
}

TEST(Galois, MultiplicationMatchesSchoolbook) {
  for (auto [p, n] : kSmallFields) {
    auto f = Field::build(p, n);
    for (std::uint32_t a = 0; a < f.q(); ++a)
      for (std::uint32_t b = 0; b < f.q(); b += 1 + f.q() / 16) {
        auto expect = slow_mul(f.coeffs({a}), f.coeffs({b}), f.spec().modulus, p);
        EXPECT_EQ(f.coeffs(f.mul({a}, {b})), expect);
      }
  }
}

TEST(Galois, AdditionIsCoordinatewise) {
  for (auto [p, n] : kSmallFields) {
    auto f = Field::build(p, n);
    for (std::uint32_t a = 0; a < f.q(); ++a)
      for (std::uint32_t b = 0; b < f.q(); ++b) {
        auto ca = f.coeffs({a}), cb = f.coeffs({b});
        for (std::size_t i = 0; i < ca.size(); ++i) ca[i] = (ca[i] + cb[i]) % p;
        ASSERT_EQ(f.coeffs(f.add({a}, {b})), ca);
      }
  }
}

TEST(Galois, FieldAxiomsRandomized) {
  std::mt19937_64 rng(11);
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{3, 4}, {2, 10}, {5, 3}, {251, 1}, {2, 16}}) {
    auto f = Field::build(p, n);
    std::uniform_int_distribution<std::uint32_t> pick(0, f.q() - 1);
    for (int i = 0; i < 2000; ++i) {
      Elem a{pick(rng)}, b{pick(rng)}, c{pick(rng)};
      ASSERT_EQ(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
      ASSERT_EQ(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
      ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
      ASSERT_EQ(f.add(a, f.neg(a)), f.zero());
      ASSERT_EQ(f.sub(f.add(a, b), b), a);
      if (a.v) ASSERT_EQ(f.mul(a, f.inv(a)), f.one());
    }
  }
}

TEST(Galois, PrimitiveGeneratesEverything) {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 16}, {3, 10}, {65521, 1}, {5, 6}}) {
    auto f = Field::build(p, n);
    std::vector<bool> seen(f.q(), false);
    Elem x = f.one();
    for (std::uint32_t k = 0; k + 1 < f.q(); ++k) {
      ASSERT_FALSE(seen[x.v]);
      seen[x.v] = true;
      x = f.mul(x, f.primitive());
    }
    EXPECT_EQ(x, f.one());
    EXPECT_FALSE(seen[0]);
  }
}

TEST(Galois, UnitySubgroupF29) {
  auto f = Field::build(29, 1);
  auto u = f.unity_subgroup(7);
  std::set<std::uint32_t> got;
  for (auto x : u) got.insert(x.v);
  EXPECT_EQ(got, (std::set<std::uint32_t>{1, 7, 16, 20, 23, 24, 25}));
  EXPECT_EQ(f.unity_subgroup(1), std::vector<Elem>{f.one()});
  EXPECT_THROW(f.unity_subgroup(5), std::invalid_argument);
}

TEST(Galois, UnitySubgroupMatchesScan) {
  for (std::uint32_t q : {16u, 27u, 49u, 64u, 81u, 125u, 256u, 1024u, 4096u, 3125u}) {
    std::uint32_t p = 2;
    while (q % p) ++p;
    std::uint32_t n = 0;
    for (auto t = q; t > 1; t /= p) ++n;
    auto f = Field::build(p, n);
    for (auto ell : divisors(q - 1)) {
      std::vector<Elem> scan;
      for (auto x : f.nonzero())
        if (f.pow(x, static_cast<std::int64_t>(ell)) == f.one()) scan.push_back(x);
      auto u = f.unity_subgroup(ell);
      ASSERT_EQ(u.size(), ell);
      ASSERT_EQ(u, scan);  // nonzero() is discrete-log ordered, like unity_subgroup
    }
  }
}

TEST(Galois, TraceExamples) {
  auto f4 = Field::build(2, 2);
  EXPECT_EQ(f4.trace(1, f4.zero()), f4.zero());
  Elem w = f4.primitive();
  EXPECT_EQ(f4.add(w, f4.mul(w, w)), f4.one());
  EXPECT_EQ(f4.trace(1, w), f4.one());
  for (std::uint32_t n : {1u, 3u, 5u, 7u}) {
    auto f = Field::build(2, n);
    EXPECT_EQ(f.trace(1, f.one()), f.one());
  }
  EXPECT_THROW(Field::build(2, 6).trace(4, f4.one()), std::invalid_argument);
}

TEST(Galois, TraceIsLinearAndOnto) {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 4}, {2, 6}, {3, 4}, {5, 2}, {2, 8}}) {
    auto f = Field::build(p, n);
    for (std::uint32_t d = 1; d <= n; ++d) {
      if (n % d) continue;
      auto sub = f.subfield(d);
      ASSERT_EQ(sub.size(), ipow(p, d));
      std::set<std::uint32_t> image;
      for (auto x : f.elements()) {
        auto t = f.trace(d, x);
        ASSERT_TRUE(f.in_subfield(t, d));
        image.insert(t.v);
      }
      EXPECT_EQ(image.size(), sub.size());
      std::mt19937 rng(d);
      for (int i = 0; i < 200; ++i) {
        Elem a = f.elements()[rng() % f.q()], b = f.elements()[rng() % f.q()];
        Elem c = sub[rng() % sub.size()];
        ASSERT_EQ(f.trace(d, f.add(f.mul(c, a), b)), f.add(f.mul(c, f.trace(d, a)), f.trace(d, b)));
      }
    }
  }
}

TEST(Galois, RelativeTraceOfSubfieldElement) {
  auto f = Field::build(2, 6);
  for (auto c : f.subfield(3)) {
    // absolute trace of F_8 computed inside F_64
    Elem t = f.zero();
    Elem y = c;
    for (int i = 0; i < 3; ++i) t = f.add(t, y), y = f.mul(y, y);
    EXPECT_EQ(f.relative_trace(c, 3, 1), t);
  }
  EXPECT_THROW(f.relative_trace(f.primitive(), 3, 1), std::invalid_argument);
}

TEST(Galois, ElementFormatRoundTrip) {
  auto f = Field::build(3, 3);
  for (auto x : f.elements()) EXPECT_EQ(f.parse_element(f.format(x)), x);
  EXPECT_EQ(f.parse_element("-1"), f.from_int(2));
  EXPECT_THROW(f.parse_element("h^2"), ParseError);
  EXPECT_THROW(f.parse_element(""), ParseError);
}

TEST(Poly, EvaluationExamples) {
  auto f5 = Field::build(5, 1);
  auto p = Poly::parse(f5, "0,1,0,1");
  std::vector<std::uint32_t> vals;
  for (std::uint32_t x = 0; x < 5; ++x) vals.push_back(p({x}).v);
  EXPECT_EQ(vals, (std::vector<std::uint32_t>{0, 2, 0, 0, 3}));
  EXPECT_EQ(Poly::zero(f5)({3}), f5.zero());
  EXPECT_EQ(Poly::constant(f5, {4})({1}).v, 4u);

  auto f29 = Field::build(29, 1);
  auto h = Poly::parse(f29, "1,0,0,15,1,1");
  std::uint64_t direct = (7ull * 7 * 7 * 7 * 7 + 7ull * 7 * 7 * 7 + 15ull * 7 * 7 * 7 + 1) % 29;
  EXPECT_EQ(h({7}).v, direct);
  EXPECT_THROW(h.eval(f5, {1}), std::invalid_argument);
}

TEST(Poly, TrimsAndPrints) {
  auto f = Field::build(2, 4);
  auto p = Poly::parse(f, "1,g^3,0,0");
  EXPECT_EQ(p.degree(), 1);
  EXPECT_EQ(p.to_string(), "1,g^3");
  EXPECT_TRUE(Poly::parse(f, "0").is_zero());
  EXPECT_EQ(Poly::parse(f, p.to_string()), p);
}

TEST(Poly, ArithmeticAgreesWithEvaluation) {
  auto f = Field::build(3, 3);
  std::mt19937 rng(5);
  auto rand_poly = [&](int deg) {
    std::vector<Elem> c(deg + 1);
    for (auto& x : c) x = {static_cast<std::uint32_t>(rng() % f.q())};
    return Poly(f, c);
  };
  for (int i = 0; i < 50; ++i) {
    auto a = rand_poly(4), b = rand_poly(3);
    for (auto x : f.elements()) {
      ASSERT_EQ((a * b)(x), f.mul(a(x), b(x)));
      ASSERT_EQ((a + b)(x), f.add(a(x), b(x)));
      ASSERT_EQ((a - b)(x), f.sub(a(x), b(x)));
      ASSERT_EQ(a.compose(b)(x), a(b(x)));
      ASSERT_EQ(a.pow(5)(x), f.pow(a(x), 5));
      ASSERT_EQ(a.stretch(4)(x), a(f.pow(x, 4)));
    }
  }
  auto h3 = Poly::geometric(f, 3);
  EXPECT_EQ(h3(f.one()), f.from_int(3));
}
