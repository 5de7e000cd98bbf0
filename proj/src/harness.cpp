#include "manyone/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "manyone/fixtures.hpp"
#include "manyone/towers.hpp"
#include "manyone/unitline.hpp"

namespace manyone {

using nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(std::string_view s) {
  const auto t = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError("expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

Field field_of_order(std::uint64_t q) {
  if (q < 2) throw ParseError("field order must be at least 2");
  const auto pf = prime_factors(q);
  if (pf.size() != 1) throw ParseError(std::to_string(q) + " is not a prime power");
  if (q > kMaxFieldOrder) throw ScaleError("q = " + std::to_string(q) + " exceeds 2^16");
  unsigned n = 0;
  for (auto t = q; t > 1; t /= pf.front()) ++n;
  return Field::build(static_cast<std::uint32_t>(pf.front()), n);
}

// F_(q^2) for a base order q with full scans of F_(q^2)^* allowed.
Field quadratic_of(std::uint64_t q) {
  if (q * q > 4096) throw ScaleError("full F_(q^2) scans need q^2 <= 4096, got q = " + std::to_string(q));
  const auto base = field_of_order(q);
  return quadratic_field(base.p(), base.n());
}

std::int64_t i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

// x^r h(x^s) evaluated term by term on F_q^*.
FiniteMapping literal_units(const Field& F, std::uint64_t r, std::uint64_t s, const Poly& h) {
  std::vector<Point> dom;
  for (auto x : F.nonzero()) dom.push_back(x.v);
  return FiniteMapping::tabulate(std::move(dom),
                                 [&](Point x) { return F.mul(F.pow({x}, i64(r)), h(F.pow({x}, i64(s)))).v; });
}

std::vector<std::string> names(const Field& F, const std::vector<Point>& pts) {
  std::vector<std::string> out;
  for (auto p : pts) out.push_back(p == F.q() ? "inf" : F.format({p}));
  return out;
}

class Grid {
 public:
  explicit Grid(std::map<std::string, std::string> raw) : raw_(std::move(raw)) {}

  std::vector<std::uint64_t> list(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    return parse_int_list(it == raw_.end() ? fallback : it->second);
  }
  std::uint64_t num(const std::string& key, std::uint64_t fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : parse_u64(it->second);
  }
  std::string str(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const { return raw_.count(key) != 0; }
  void finish() const {
    for (const auto& [k, v] : raw_)
      if (k != "m" && !used_.count(k)) throw ParseError("unknown grid key '" + k + "' for this family");
  }

 private:
  std::map<std::string, std::string> raw_;
  std::set<std::string> used_;
};

using Task = std::function<std::vector<Record>()>;

struct Plan {
  std::vector<Task> tasks;
};

Record skipped(const std::string& instance, ordered_json params, const std::string& why) {
  Record rec;
  rec.instance = instance;
  rec.parameters = std::move(params);
  rec.status = "skipped: hypothesis";
  rec.reason = why;
  return rec;
}

Record checked(const std::string& instance, const ordered_json& params, std::size_t m, ordered_json predicted,
               ordered_json observed, std::string reason, std::vector<std::string> exceptional = {}) {
  Record rec;
  rec.instance = instance;
  rec.parameters = params;
  rec.m = m;
  rec.predicted = std::move(predicted);
  rec.observed = std::move(observed);
  rec.reason = std::move(reason);
  rec.exceptional_set = std::move(exceptional);
  return rec;
}

// One record per m: predictor against the brute-force verdict on `oracle`.
template <class Predict>
void sweep_m(std::vector<Record>& out, const Field& F, const std::string& instance, const ordered_json& params,
             const FiniteMapping& oracle, std::size_t lo, std::size_t hi, Predict&& predict) {
  for (std::size_t m = lo; m <= hi; ++m) {
    const Prediction pred = predict(m);
    const auto rep = check_m_to_1(oracle, m);
    out.push_back(checked(instance, params, m, pred.verdict, rep.verdict, pred.reason,
                          rep.verdict ? names(F, rep.exceptional_set) : std::vector<std::string>{}));
  }
}

ordered_json form_params(const Field& F, std::uint64_t r, std::uint64_t s, const Poly& h) {
  ordered_json p;
  p["field"] = F.spec().to_string();
  p["q"] = F.q();
  p["s"] = s;
  p["r"] = r;
  p["h"] = h.to_string();
  return p;
}

Poly random_poly(std::mt19937_64& rng, const Field& F, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<std::uint32_t> coef(0, F.q() - 1);
  std::vector<Elem> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& e : c) e = {coef(rng)};
  return Poly(F, std::move(c));
}

// Random forms per (q, s): max(per_s, 2s) of them, the i-th with r = 1 + (i mod 2s).
// Each draw retries up to 50 times for a rootless h before it is recorded as skipped.
template <class Emit>
void plan_forms(Plan& plan, Grid& g, const std::string& fallback_q, std::uint64_t seed, Emit emit,
                const std::function<bool(std::uint64_t q, std::uint64_t s)>& keep_s = {}) {
  const auto qs = g.list("q", fallback_q);
  const auto per_s = g.num("per_s", 20);
  const int degree = static_cast<int>(g.num("degree", 5));
  for (auto q : qs) {
    const Field F = field_of_order(q);
    for (auto s : divisors(q - 1)) {
      if (keep_s && !keep_s(q, s)) continue;
      const auto count = std::max<std::uint64_t>(per_s, 2 * s);
      for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t r = 1 + i % (2 * s);
        const std::uint64_t task_seed = seed ^ (q * 0x9E3779B97F4A7C15ull) ^ (s << 20) ^ (i << 40);
        plan.tasks.push_back([=] {
          std::mt19937_64 rng(task_seed);
          std::optional<CycloForm> f;
          for (int tries = 0; tries < 50 && !f; ++tries) {
            try {
              f.emplace(random_poly(rng, F, degree), r, s);
            } catch (const HypothesisError&) {
            }
          }
          if (f) return emit(*f);
          return std::vector<Record>{skipped("random form", form_params(F, r, s, Poly::zero(F)),
                                             "no rootless h found in 50 draws")};
        });
      }
    }
  }
}

std::vector<Record> main_records(const CycloForm& f, const std::string& instance, std::size_t mcap) {
  const auto dec = decompose(f);
  const auto oracle = literal_units(f.field(), f.r(), f.s(), f.h());
  std::size_t hi = dec.ell * dec.m1;
  if (mcap) hi = std::min(hi, mcap);
  std::vector<Record> out;
  sweep_m(out, f.field(), instance, form_params(f.field(), f.r(), f.s(), f.h()), oracle, 1, hi,
          [&](std::size_t m) { return main_predict(f, dec, m); });
  return out;
}

Plan plan_main(Grid& g, const VerifyJob& job) {
  Plan plan;
  const std::size_t mcap = job.all_m ? 0 : g.num("mmax", 16);
  const auto qs = g.list("q", "5,7,8,9,11,13");
  if (std::count(qs.begin(), qs.end(), 29)) {
    plan.tasks.push_back([mcap] {
      auto F = Field::build(29, 1);
      return main_records(CycloForm(Poly::parse(F, "1,0,0,15,1,1"), 2, 4), "fixture", mcap);
    });
  }
  if (std::count(qs.begin(), qs.end(), 64)) {
    plan.tasks.push_back([mcap] {
      auto F = Field::build(2, 6, std::vector<std::uint32_t>{1, 1, 0, 1, 1, 0, 1});
      return main_records(CycloForm(Poly(F, {F.gen_pow(9), F.one()}), 2, 21), "fixture", mcap);
    });
  }
  plan_forms(plan, g, "5,7,8,9,11,13", job.seed,
             [mcap](const CycloForm& f) { return main_records(f, "random form", mcap); });
  return plan;
}

Plan plan_small_m(Grid& g, const VerifyJob& job) {
  Plan plan;
  plan_forms(
      plan, g, "5,7,8,9,11,13", job.seed,
      [](const CycloForm& f) {
        std::vector<Record> out;
        const auto oracle = literal_units(f.field(), f.r(), f.s(), f.h());
        const auto params = form_params(f.field(), f.r(), f.s(), f.h());
        for (std::size_t m : {2, 3})
          if (f.ell() >= m)
            sweep_m(out, f.field(), "random form", params, oracle, m, m,
                    [&](std::size_t mm) { return small_m_predict(f, mm); });
        return out;
      },
      [](std::uint64_t q, std::uint64_t s) { return s >= 2 && (q - 1) / s >= 2; });
  return plan;
}

Plan plan_small_ell(Grid& g, const VerifyJob& job) {
  Plan plan;
  plan_forms(
      plan, g, "5,7,8,9,11,13", job.seed,
      [](const CycloForm& f) {
        std::vector<Record> out;
        const auto oracle = literal_units(f.field(), f.r(), f.s(), f.h());
        const auto m1 = std::gcd(f.r(), f.s());
        sweep_m(out, f.field(), "random form", form_params(f.field(), f.r(), f.s(), f.h()), oracle, 1,
                f.ell() * m1, [&](std::size_t m) { return small_ell_predict(f, m); });
        return out;
      },
      [](std::uint64_t q, std::uint64_t s) { return (q - 1) / s == 2 || (q - 1) / s == 3; });
  return plan;
}

// x^r (x^d - a)^(k m1) over F_(q^2), s = q-1, with the monomial law h(a)^s1 = (-a)^(-k) a^(-kd) on U_(q+1).
Plan plan_monomial(Grid& g, const VerifyJob& job) {
  Plan plan;
  const std::size_t mcap = job.all_m ? 0 : g.num("mmax", 16);
  const auto qs = g.list("q", "3,4,5,7,8");
  const auto kmax = g.num("kmax", 4), rmax = g.num("rmax", 12);
  const bool dset = g.has("dmax");
  const auto dmax_key = g.num("dmax", 0);
  for (auto qb : qs) {
    const Field F = quadratic_of(qb);
    const std::uint64_t qm1 = qb - 1, qp1 = qb + 1;
    const auto dmax = dset ? dmax_key : qp1;
    if (qb == 5) {
      plan.tasks.push_back([F, mcap] {
        // x^(4q-3) + x = x (x^(4(q-1)) + 1)
        CycloForm f(Poly::parse(F, "1,0,0,0,1"), 1, 4);
        const auto bt = infer_monomial(f);
        if (!bt) throw std::logic_error("x^17 + x lost its monomial law");
        std::vector<Record> out;
        const auto m1 = std::gcd(f.r(), f.s());
        std::size_t hi = f.ell() * m1;
        if (mcap) hi = std::min(hi, mcap);
        sweep_m(out, F, "fixture", form_params(F, 1, 4, f.h()), literal_units(F, 1, 4, f.h()), 1, hi,
                [&](std::size_t m) { return monomial_predict(f, bt->first, bt->second, m); });
        return out;
      });
    }
    for (auto a : F.unity_subgroup(qp1))
      for (std::uint64_t d = 1; d <= dmax; ++d)
        for (std::uint64_t r = 1; r <= rmax; ++r)
          for (std::uint64_t k = 1; k <= kmax; ++k)
            plan.tasks.push_back([=] {
              const auto m1 = std::gcd(r, qm1);
              const Poly h = (Poly::monomial(F, F.one(), d) - Poly::constant(F, a)).pow(k * m1);
              ordered_json params = form_params(F, r, qm1, h);
              params["a"] = F.format(a);
              params["d"] = d;
              params["k"] = k;
              std::optional<CycloForm> f;
              try {
                f.emplace(h, r, qm1);
              } catch (const HypothesisError& e) {
                return std::vector<Record>{skipped("x^r (x^d - a)^(k m1)", params, e.what())};
              }
              const Elem beta = F.pow(F.neg(a), -i64(k));
              std::size_t hi = qp1 * m1;
              if (mcap) hi = std::min(hi, mcap);
              std::vector<Record> out;
              sweep_m(out, F, "x^r (x^d - a)^(k m1)", params, literal_units(F, r, qm1, h), 1, hi,
                      [&](std::size_t m) { return monomial_predict(*f, beta, -i64(k * d), m); });
              return out;
            });
  }
  return plan;
}

Plan plan_hd_roots(Grid& g, const VerifyJob&) {
  Plan plan;
  const auto qs = g.list("q", "2..64");
  const auto dmax = g.num("dmax", 12), emax = g.num("emax", 12);
  for (auto q : qs) {
    if (prime_factors(q).size() != 1) continue;
    const Field F = field_of_order(q);
    plan.tasks.push_back([=] {
      std::vector<Record> out;
      for (auto ell : divisors(q - 1))
        for (std::uint64_t d = 1; d <= dmax; ++d)
          for (std::uint64_t e = 1; e <= emax; ++e) {
            ordered_json p;
            p["q"] = q;
            p["ell"] = ell;
            p["d"] = d;
            p["e"] = e;
            out.push_back(checked("h_d(x^e) on U_ell", p, 0, hd_rootless_criterion(F.p(), ell, d, e),
                                  hd_rootless_scan(F, ell, d, e), "gcd criterion vs scan"));
          }
      return out;
    });
  }
  return plan;
}

Field char2_quadratic(std::uint64_t n) {
  if (n < 1) throw ParseError("n must be positive");
  if (2 * n > 16) throw ScaleError("q^2 = 2^" + std::to_string(2 * n) + " exceeds 2^16");
  return quadratic_field(2, static_cast<unsigned>(n));
}

std::vector<Record> family_records(const Field& F, const FamilyRecord& fr, ordered_json params) {
  std::vector<Record> out;
  for (const auto& c : fr.checks) {
    ordered_json p = params;
    p["map"] = c.map;
    out.push_back(checked(fr.family, p, c.m, c.predicted, c.observed, "", names(F, c.exceptional_set)));
  }
  return out;
}

Plan plan_halfplane(Grid& g, const VerifyJob&) {
  Plan plan;
  for (auto n : g.list("n", "1..8")) {
    const Field F = char2_quadratic(n);
    plan.tasks.push_back([F, n] {
      const auto split = halfplane_split(F);
      const std::uint64_t half = std::uint64_t{1} << (n - 1);
      // Tr(1/c) counted directly over F_q^*
      std::uint64_t zero_trace = 0, one_trace = 0;
      for (auto c : base_line(F))
        if (c != F.zero()) (base_trace(F, F.inv(c)) == F.zero() ? zero_trace : one_trace)++;
      ordered_json p;
      p["n"] = n;
      p["q"] = half * 2;
      std::vector<Record> out;
      out.push_back(checked("#A0", p, 0, half - 1, split.A0.size(), "2^(n-1) - 1"));
      out.push_back(checked("#A1", p, 0, half, split.A1.size(), "2^(n-1)"));
      out.push_back(checked("#A0 by trace", p, 0, zero_trace, split.A0.size(), "direct trace count"));
      out.push_back(checked("#A1 by trace", p, 0, one_trace, split.A1.size(), "direct trace count"));
      out.push_back(checked("a + 1/a on F_q \\ {0,1}", p, 2, true, split.two_to_one_onto_A0, "2-to-1 onto A0"));
      out.push_back(checked("a + 1/a on U_(q+1) \\ {1}", p, 2, true, split.two_to_one_onto_A1, "2-to-1 onto A1"));
      return out;
    });
  }
  return plan;
}

Plan plan_unit_lemmas(Grid& g, const VerifyJob&) {
  Plan plan;
  for (auto n : g.list("n", "1..8")) {
    const Field F = char2_quadratic(n);
    plan.tasks.push_back([F, n] {
      ordered_json p;
      p["n"] = n;
      const auto U = unit_circle(F);
      const auto quartic = Poly::parse(F, "1,1,0,0,1");
      const bool rootless = std::none_of(U.begin(), U.end(), [&](Elem u) { return quartic(u) == F.zero(); });
      std::vector<Record> out;
      out.push_back(checked("x^4 + x + 1 rootless on U_(q+1)", p, 0, true, rootless, ""));
      out.push_back(checked("G permutes U_(q+1)", p, 1, n % 2 == 0, permutes_unit_circle(quintic_G(F)),
                            n % 2 == 0 ? "n even" : "n odd"));
      return out;
    });
  }
  return plan;
}

Plan plan_g3(Grid& g, const VerifyJob&) {
  Plan plan;
  const auto full = g.num("full", 5);
  for (auto n : g.list("n", "1..6")) {
    const Field F = char2_quadratic(n);
    for (auto c : base_line(F)) {
      if (c == F.zero()) continue;
      plan.tasks.push_back([F, n, c, full] {
        ordered_json p;
        p["n"] = n;
        p["c"] = F.format(c);
        try {
          return family_records(F, g3_family(F, c, n <= full), p);
        } catch (const HypothesisError& e) {
          return std::vector<Record>{skipped("g3", p, e.what())};
        }
      });
    }
  }
  return plan;
}

Plan plan_g5(Grid& g, const VerifyJob&) {
  Plan plan;
  const auto full = g.num("full", 5);
  for (auto n : g.list("n", "1..8")) {
    const Field F = char2_quadratic(n);
    plan.tasks.push_back([F, n, full] {
      ordered_json p;
      p["n"] = n;
      try {
        return family_records(F, g5_family(F, n <= full), p);
      } catch (const HypothesisError& e) {
        return std::vector<Record>{skipped("g5", p, e.what())};
      }
    });
  }
  return plan;
}

Plan plan_transfer(Grid& g, const VerifyJob&) {
  Plan plan;
  const auto dmax = g.num("dmax", 11), kmax = g.num("kmax", 3);
  for (auto q : g.list("q", "4,8")) {
    const Field F = quadratic_of(q);
    if (F.p() != 2) throw ParseError("transfer instances live in characteristic 2");
    const auto n = F.n() / 2;
    for (std::uint64_t d = 1; d <= dmax; ++d)
      for (std::uint64_t k = 1; k <= kmax; ++k)
        for (int shape : {0, 1}) {
          if (n % 2 == 1) {
            for (auto c : base_line(F)) {
              if (c == F.zero()) continue;
              plan.tasks.push_back([=] {
                ordered_json p;
                p["q"] = q;
                p["c"] = F.format(c);
                p["shape"] = shape;
                p["d"] = d;
                p["k"] = k;
                try {
                  return family_records(F, f3_transfer(F, c, shape, d, k), p);
                } catch (const HypothesisError& e) {
                  return std::vector<Record>{skipped("F3to1", p, e.what())};
                }
              });
            }
          } else {
            plan.tasks.push_back([=] {
              ordered_json p;
              p["q"] = q;
              p["shape"] = shape;
              p["d"] = d;
              p["k"] = k;
              try {
                return family_records(F, f5_transfer(F, shape, d, k), p);
              } catch (const HypothesisError& e) {
                return std::vector<Record>{skipped("F5to1", p, e.what())};
              }
            });
          }
        }
  }
  return plan;
}

// Tower families with unconstrained random parameters: the builders' scans decide what is skipped.
using TowerBuild = std::function<TowerInstance(std::mt19937_64&, const Field&, ordered_json&)>;

Elem draw_elem(std::mt19937_64& rng, const Field& F, ordered_json& p, const char* key) {
  const Elem e{std::uniform_int_distribution<std::uint32_t>(0, F.q() - 1)(rng)};
  p[key] = F.format(e);
  return e;
}

std::uint64_t draw_int(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi, ordered_json& p, const char* key) {
  const auto v = std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  p[key] = v;
  return v;
}

Elem draw_base(std::mt19937_64& rng, const Field& F, ordered_json& p, const char* key) {
  const auto line = base_line(F);
  const Elem e = line[std::uniform_int_distribution<std::size_t>(0, line.size() - 1)(rng)];
  p[key] = F.format(e);
  return e;
}

// (b^q x^k + a^q)/(a x^k + b) and (b x^k + b^q)/(a x^k + a^q), unchecked.
UnitPair raw_unit_pair(const Field& F, Elem a, Elem b, std::uint64_t k) {
  return {Poly(F, {conj(F, a), conj(F, b)}).stretch(k), Poly(F, {b, a}).stretch(k), F.one(), k};
}
LinePair raw_line_pair(const Field& F, Elem a, Elem b, std::uint64_t k) {
  return {Poly(F, {conj(F, b), b}).stretch(k), Poly(F, {conj(F, a), a}).stretch(k), F.one(), k};
}

const std::map<std::string, std::pair<bool, TowerBuild>>& tower_builders() {
  // bool: characteristic 2 only
  static const std::map<std::string, std::pair<bool, TowerBuild>> table = {
      {"R1",
       {false,
        [](std::mt19937_64& rng, const Field& F, ordered_json& p) {
          const auto q = half_order(F);
          const Elem a = draw_elem(rng, F, p, "a"), b = draw_elem(rng, F, p, "b");
          const Elem al = draw_elem(rng, F, p, "alpha"), be = draw_elem(rng, F, p, "beta");
          const auto k = draw_int(rng, 1, 4, p, "k"), n = draw_int(rng, 1, 2 * (q + 1), p, "n");
          return r1_tower(raw_unit_pair(F, a, b, k), al, be, n);
        }}},
      {"R1L1",
       {false,
        [](std::mt19937_64& rng, const Field& F, ordered_json& p) {
          const Elem a = draw_elem(rng, F, p, "alpha"), b = draw_elem(rng, F, p, "beta");
          const Elem c = draw_elem(rng, F, p, "gamma"), d = draw_elem(rng, F, p, "delta");
          const auto n = draw_int(rng, 1, 2 * (half_order(F) + 1), p, "n");
          return r1l1_tower(F, a, b, c, d, n);
        }}},
      {"R1L5",
       {true,
        [](std::mt19937_64& rng, const Field& F, ordered_json& p) {
          const Elem a = draw_elem(rng, F, p, "alpha"), b = draw_elem(rng, F, p, "beta");
          const auto n = draw_int(rng, 1, 2 * (half_order(F) + 1), p, "n");
          return r1l5_tower(F, a, b, n);
        }}},
      {"R3",
       {true,
        [](std::mt19937_64& rng, const Field& F, ordered_json& p) {
          const auto q = half_order(F);
          const Elem a = draw_elem(rng, F, p, "a"), b = draw_elem(rng, F, p, "b");
          const Elem c = draw_base(rng, F, p, "c");
          const auto k = draw_int(rng, 1, 4, p, "k"), n = draw_int(rng, 1, 2 * (q + 1), p, "n");
          return r3_tower(raw_unit_pair(F, a, b, k), c, n);
        }}},
      {"R3L1",
       {true,
        [](std::mt19937_64& rng, const Field& F, ordered_json& p) {
          const Elem a = draw_elem(rng, F, p, "alpha"), b = draw_elem(rng, F, p, "beta");
          const Elem c = draw_base(rng, F, p, "c");
          const auto n = draw_int(rng, 1, 2 * (half_order(F) + 1), p, "n");
          return r3l1_tower(F, a, b, c, n);
        }}},
      {"FqR1",
       {false,
        [](std::mt19937_64& rng, const Field& F, ordered_json& p) {
          const auto q = half_order(F);
          const Elem a = draw_elem(rng, F, p, "a"), b = draw_elem(rng, F, p, "b");
          const Elem al = draw_elem(rng, F, p, "alpha"), be = draw_elem(rng, F, p, "beta");
          const auto k = draw_int(rng, 1, 4, p, "k"), n = draw_int(rng, 1, 2 * (q + 1), p, "n");
          return fq_r1_tower(raw_line_pair(F, a, b, k), al, be, n);
        }}},
      {"FqR1L1",
       {false,
        [](std::mt19937_64& rng, const Field& F, ordered_json& p) {
          const Elem a = draw_elem(rng, F, p, "alpha"), b = draw_elem(rng, F, p, "beta");
          const Elem c = draw_elem(rng, F, p, "gamma"), d = draw_elem(rng, F, p, "delta");
          const auto n = draw_int(rng, 1, 2 * (half_order(F) + 1), p, "n");
          return fq_r1l1_tower(F, a, b, c, d, n);
        }}},
      {"FqRk",
       {false,
        [](std::mt19937_64& rng, const Field& F, ordered_json& p) {
          const auto q = half_order(F);
          const Elem a = draw_elem(rng, F, p, "a"), b = draw_elem(rng, F, p, "b");
          const Elem al = draw_elem(rng, F, p, "alpha"), be = draw_elem(rng, F, p, "beta");
          const Elem c = draw_elem(rng, F, p, "gamma"), d = draw_elem(rng, F, p, "delta");
          const auto j = draw_int(rng, 1, 4, p, "j"), k = draw_int(rng, 1, 4, p, "k");
          const auto n = draw_int(rng, 1, 2 * (q + 1), p, "n");
          return fq_rk_tower(raw_line_pair(F, a, b, j), al, be, c, d, n, k);
        }}},
      {"FqRkL1",
       {false,
        [](std::mt19937_64& rng, const Field& F, ordered_json& p) {
          const auto q = half_order(F);
          const Elem be = draw_elem(rng, F, p, "beta"), th = draw_elem(rng, F, p, "theta");
          const Elem d = draw_elem(rng, F, p, "delta");
          const auto k = draw_int(rng, 1, 4, p, "k"), n = draw_int(rng, 1, 2 * (q + 1), p, "n");
          return fq_rkl1_tower(F, be, th, d, n, k);
        }}},
      {"gbar",
       {true,
        [](std::mt19937_64& rng, const Field& F, ordered_json& p) {
          const Elem a = draw_elem(rng, F, p, "a"), b = draw_elem(rng, F, p, "b");
          const Elem al = draw_elem(rng, F, p, "alpha");
          const Elem na = draw_elem(rng, F, p, "N1"), nb = draw_elem(rng, F, p, "N0");
          const auto k = draw_int(rng, 1, 4, p, "k");
          return gbar_tower(raw_line_pair(F, a, b, k), Poly(F, {nb, na}), al);
        }}},
  };
  return table;
}

Plan plan_tower(const std::string& family, Grid& g, const VerifyJob& job) {
  Plan plan;
  const auto& [char2, build] = tower_builders().at(family);
  const auto draws = g.num("draws", 20);
  for (auto q : g.list("q", char2 ? "4,8" : "3,4,5,7,8")) {
    const Field F = quadratic_of(q);
    if (char2 && F.p() != 2) continue;
    for (std::uint64_t i = 0; i < draws; ++i) {
      const std::uint64_t task_seed = job.seed ^ (q * 0x9E3779B97F4A7C15ull) ^ (i << 32) ^ std::hash<std::string>{}(family);
      plan.tasks.push_back([=, build = build] {
        std::mt19937_64 rng(task_seed);
        ordered_json p;
        p["q"] = q;
        std::optional<TowerInstance> inst;
        try {
          inst = build(rng, F, p);
        } catch (const HypothesisError& e) {
          return std::vector<Record>{skipped(family, p, e.what())};
        }
        std::vector<Record> out;
        for (auto m1 : divisors(q - 1)) {
          const auto r = tower_exponent(*inst, m1);
          if (!r) continue;
          ordered_json pr = p;
          pr["r"] = *r;
          const auto map = tower_map(*inst, *r);
          const std::size_t lo = inst->kind == TowerKind::gbar ? m1 : 1;
          sweep_m(out, F, family, pr, map, lo, tower_max_m(*inst, *r),
                  [&](std::size_t m) { return tower_predict(*inst, *r, m); });
        }
        return out;
      });
    }
  }
  return plan;
}

Plan plan_criteria(Grid& g, const VerifyJob&) {
  Plan plan;
  namespace fs = std::filesystem;
  const fs::path root = g.str("path", "fixtures");
  std::vector<fs::path> files;
  if (fs::is_directory(root)) {
    for (const auto& e : fs::directory_iterator(root))
      if (e.path().extension() == ".json") files.push_back(e.path());
  } else if (fs::exists(root)) {
    files.push_back(root);
  } else {
    throw ParseError("no fixture file or directory at '" + root.string() + "'");
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files)
    plan.tasks.push_back([file] {
      std::ifstream in(file);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(file.string() + ": " + e.what());
      }
      const auto fx = load_fixture(j);
      std::vector<Record> out;
      ordered_json p;
      p["file"] = file.filename().string();
      for (const auto& r : run_fixture(fx)) {
        if (!r.error.empty()) {
          auto rec = skipped(r.kind, p, r.error);
          rec.m = r.m;
          out.push_back(rec);
        } else {
          out.push_back(checked(r.kind, p, r.m, r.lhs, r.rhs, "lhs vs rhs"));
        }
      }
      return out;
    });
  return plan;
}

// counts[m] for m = 0..q: number of m-to-1 self-maps of a q-set.
std::vector<std::uint64_t> enumerate_counts(std::uint64_t q) {
  std::vector<std::uint64_t> counts(q + 1, 0);
  std::vector<std::uint32_t> img(q, 0), fiber(q, 0), sizes(q + 1, 0);
  fiber[0] = static_cast<std::uint32_t>(q);
  sizes[0] = static_cast<std::uint32_t>(q - 1);
  sizes[q] = 1;
  auto move = [&](std::uint32_t from, std::uint32_t to) {
    --sizes[fiber[from]];
    --fiber[from];
    ++sizes[fiber[from]];
    --sizes[fiber[to]];
    ++fiber[to];
    ++sizes[fiber[to]];
  };
  while (true) {
    for (std::uint64_t m = 1; m <= q; ++m)
      if (sizes[m] == q / m) ++counts[m];
    std::size_t i = 0;
    for (; i < q; ++i) {
      if (img[i] + 1 < q) {
        move(img[i], img[i] + 1);
        ++img[i];
        break;
      }
      move(img[i], 0);
      img[i] = 0;
    }
    if (i == q) break;
  }
  return counts;
}

std::uint64_t self_maps(std::uint64_t q) {
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < q; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / q) return std::numeric_limits<std::uint64_t>::max();
    total *= q;
  }
  return total;
}

Plan plan_count(Grid& g, const VerifyJob&) {
  Plan plan;
  const auto budget = g.num("budget", 10'000'000);
  for (auto q : g.list("q", "2..5")) {
    if (q < 1) throw ParseError("q must be positive");
    if (self_maps(q) > budget)
      throw ScaleError("enumerating " + std::to_string(q) + "^" + std::to_string(q) + " maps exceeds the budget");
    plan.tasks.push_back([q] {
      const auto counts = enumerate_counts(q);
      std::vector<Record> out;
      ordered_json p;
      p["q"] = q;
      for (std::uint64_t m = 1; m <= q; ++m)
        out.push_back(checked("self-maps of a q-set", p, m, count_formula(q, m).str(), std::to_string(counts[m]),
                              "formula vs enumeration"));
      return out;
    });
  }
  return plan;
}

// Deliberately wrong predictor ("x^k always permutes F_q^*") for exercising the exit-code contract.
Plan plan_negative_control(Grid& g, const VerifyJob&) {
  Plan plan;
  const auto ks = g.list("k", "1..3");
  for (auto q : g.list("q", "7")) {
    const Field F = field_of_order(q);
    plan.tasks.push_back([F, ks] {
      std::vector<Record> out;
      for (auto k : ks) {
        ordered_json p;
        p["q"] = F.q();
        p["k"] = k;
        sweep_m(out, F, "x^k", p, literal_units(F, k, 1, Poly::constant(F, F.one())), 1, 1,
                [](std::size_t) { return Prediction{true, "claimed without proof"}; });
      }
      return out;
    });
  }
  return plan;
}

using Planner = std::function<Plan(Grid&, const VerifyJob&)>;

struct FamilyEntry {
  std::string name, keys;
  Planner plan;
};

const std::vector<FamilyEntry>& family_table() {
  static const std::vector<FamilyEntry> table = [] {
    std::vector<FamilyEntry> t = {
        {"count", "q=2..5 budget=10000000", plan_count},
        {"main", "q=5,7,8,9,11,13 per_s=20 degree=5 mmax=16 (29 and 64 add the worked examples)", plan_main},
        {"small_m", "q=5,7,8,9,11,13 per_s=20 degree=5", plan_small_m},
        {"small_ell", "q=5,7,8,9,11,13 per_s=20 degree=5", plan_small_ell},
        {"monomial", "q=3,4,5,7,8 dmax=q+1 kmax=4 rmax=12 mmax=16", plan_monomial},
        {"hd_roots", "q=2..64 dmax=12 emax=12", plan_hd_roots},
        {"halfplane", "n=1..8", plan_halfplane},
        {"unit_lemmas", "n=1..8", plan_unit_lemmas},
        {"g3", "n=1..6 full=5", plan_g3},
        {"g5", "n=1..8 full=5", plan_g5},
        {"transfer", "q=4,8 dmax=11 kmax=3", plan_transfer},
        {"criteria", "path=fixtures", plan_criteria},
        {"negative_control", "q=7 k=1..3 (wrong on purpose: exits 1 when some (k, q-1) > 1)", plan_negative_control},
    };
    for (const auto& [name, entry] : tower_builders()) {
      const std::string fam = name;
      t.push_back({fam, std::string(entry.first ? "q=4,8" : "q=3,4,5,7,8") + " draws=20",
                   [fam](Grid& g, const VerifyJob& job) { return plan_tower(fam, g, job); }});
    }
    return t;
  }();
  return table;
}

template <class T>
std::vector<T> run_pool(const std::vector<std::function<T()>>& tasks, unsigned jobs) {
  std::vector<T> results(tasks.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(tasks.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::uint64_t> parse_int_list(std::string_view text) {
  std::set<std::uint64_t> out;
  std::string_view rest = text;
  if (trim(text).empty()) throw ParseError("empty integer list");
  while (true) {
    const auto comma = rest.find(',');
    const auto tok = rest.substr(0, comma);
    const auto dots = tok.find("..");
    if (dots == std::string_view::npos) {
      out.insert(parse_u64(tok));
    } else {
      const auto lo = parse_u64(tok.substr(0, dots)), hi = parse_u64(tok.substr(dots + 2));
      if (lo > hi) throw ParseError("empty range '" + std::string(tok) + "'");
      if (hi - lo > 1'000'000) throw ScaleError("range '" + std::string(tok) + "' is too long");
      for (auto v = lo; v <= hi; ++v) out.insert(v);
    }
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return {out.begin(), out.end()};
}

std::map<std::string, std::string> parse_grid(std::string_view text) {
  std::map<std::string, std::string> out;
  std::string_view rest = text;
  while (!trim(rest).empty()) {
    const auto semi = rest.find(';');
    const auto tok = rest.substr(0, semi);
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw ParseError("grid entry '" + std::string(tok) + "' needs key=value");
    const auto key = trim(tok.substr(0, eq));
    if (key.empty()) throw ParseError("grid entry '" + std::string(tok) + "' has an empty key");
    out[key] = trim(tok.substr(eq + 1));
    if (semi == std::string_view::npos) break;
    rest = rest.substr(semi + 1);
  }
  return out;
}

ordered_json analyze(const AnalyzeRequest& req) {
  const Field F = Field::parse(req.field);
  const Poly f = Poly::parse(F, req.poly);
  const auto dom_elems = req.star ? F.nonzero() : F.elements();
  std::vector<Point> dom;
  for (auto x : dom_elems) dom.push_back(x.v);
  const auto map = FiniteMapping::tabulate(std::move(dom), [&](Point x) { return f(Elem{x}).v; });
  const PointNamer name = [&](Point p) { return F.format({p}); };
  ordered_json out;
  out["field"] = F.spec().to_string();
  out["polynomial"] = f.to_string();
  out["domain"] = req.star ? "F_q^*" : "F_q";
  out["size"] = map.size();
  out["histogram"] = fiber_histogram(map);
  const auto adm = admissible_m_set(map);
  out["admissible_m"] = adm;
  auto reports = ordered_json::array();
  if (req.m) {
    if (*req.m < 1 || *req.m > map.size())
      throw ParseError("m = " + std::to_string(*req.m) + " is outside 1.." + std::to_string(map.size()));
    reports.push_back(report_to_json(check_m_to_1(map, *req.m), name));
  } else {
    for (auto m : adm) reports.push_back(report_to_json(check_m_to_1(map, m), name));
  }
  out["reports"] = reports;
  return out;
}

std::string analyze_text(const ordered_json& j) {
  std::ostringstream os;
  os << "f = " << j["polynomial"].get<std::string>() << " on " << j["domain"].get<std::string>() << " over "
     << j["field"].get<std::string>() << " (" << j["size"].get<std::size_t>() << " points)\n";
  os << "fiber sizes:";
  for (const auto& v : j["histogram"]) os << ' ' << v.get<std::size_t>();
  os << "\nadmissible m:";
  if (j["admissible_m"].empty()) os << " none";
  for (const auto& v : j["admissible_m"]) os << ' ' << v.get<std::size_t>();
  os << '\n';
  for (const auto& r : j["reports"]) {
    const auto m = r["m"].get<std::size_t>();
    if (!r["verdict"].get<bool>()) {
      os << "not " << m << "-to-1 (" << r["k"].get<std::size_t>() << " fibers of size " << m << ")\n";
      continue;
    }
    os << m << "-to-1, exceptional set {";
    bool first = true;
    for (const auto& e : r["exceptional_set"]) {
      os << (first ? "" : ", ") << e.get<std::string>();
      first = false;
    }
    os << "}\n";
  }
  return os.str();
}

std::size_t Report::skipped() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const Record& r) { return !r.checked(); }));
}

std::size_t Report::disagreements() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const Record& r) { return !r.agree(); }));
}

std::vector<std::pair<std::string, std::string>> verify_families() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : family_table()) out.emplace_back(e.name, e.keys);
  return out;
}

Report run_verify(const VerifyJob& job) {
  const auto& table = family_table();
  const auto it = std::find_if(table.begin(), table.end(), [&](const FamilyEntry& e) { return e.name == job.family; });
  if (it == table.end()) throw ParseError("unknown family '" + job.family + "'");
  const auto t0 = Clock::now();
  Grid grid(job.grid);
  Plan plan = it->plan(grid, job);
  grid.finish();
  std::optional<std::vector<std::uint64_t>> mfilter;
  if (job.grid.count("m")) mfilter = parse_int_list(job.grid.at("m"));

  std::vector<std::function<std::vector<Record>()>> timed;
  for (auto& task : plan.tasks)
    timed.push_back([&task] {
      const auto start = Clock::now();
      auto recs = task();
      const double dt = seconds_since(start);
      for (auto& r : recs) r.elapsed = dt;
      return recs;
    });
  auto parts = run_pool(timed, job.jobs);

  Report rep;
  rep.family = job.family;
  rep.job["family"] = job.family;
  ordered_json grid_json = ordered_json::object();
  for (const auto& [k, v] : job.grid) grid_json[k] = v;
  rep.job["grid"] = grid_json;
  rep.job["all_m"] = job.all_m;
  rep.job["seed"] = job.seed;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (auto& r : parts[i]) {
      if (mfilter && r.m != 0 && !std::binary_search(mfilter->begin(), mfilter->end(), r.m)) continue;
      r.seq = i;
      rep.records.push_back(std::move(r));
    }
  std::stable_sort(rep.records.begin(), rep.records.end(),
                   [](const Record& a, const Record& b) { return std::tie(a.seq, a.m) < std::tie(b.seq, b.m); });
  rep.elapsed = seconds_since(t0);
  return rep;
}

ordered_json report_json(const Report& rep) {
  ordered_json j;
  j["schema"] = "manyone-report/1";
  j["command"] = "verify";
  j["family"] = rep.family;
  j["job"] = rep.job;
  ordered_json summary;
  summary["total"] = rep.total();
  summary["checked"] = rep.total() - rep.skipped();
  summary["skipped"] = rep.skipped();
  summary["agreements"] = rep.agreements();
  summary["disagreements"] = rep.disagreements();
  summary["elapsed"] = rep.elapsed;
  j["summary"] = summary;
  auto recs = ordered_json::array();
  for (const auto& r : rep.records) {
    ordered_json o;
    o["seq"] = r.seq;
    o["instance"] = r.instance;
    o["parameters"] = r.parameters;
    o["m"] = r.m;
    o["status"] = r.status;
    o["predicted"] = r.predicted;
    o["observed"] = r.observed;
    o["agree"] = r.agree();
    o["reason"] = r.reason;
    o["exceptional_set"] = r.exceptional_set;
    o["elapsed"] = r.elapsed;
    recs.push_back(std::move(o));
  }
  j["records"] = std::move(recs);
  return j;
}

std::string report_csv(const Report& rep) {
  std::ostringstream os;
  os << "seq,instance,parameters,m,status,predicted,observed,agree,reason,exceptional_set,elapsed\n";
  for (const auto& r : rep.records) {
    std::string ex;
    for (const auto& e : r.exceptional_set) ex += (ex.empty() ? "" : " ") + e;
    os << r.seq << ',' << csv_field(r.instance) << ',' << csv_field(r.parameters.dump()) << ',' << r.m << ','
       << csv_field(r.status) << ',' << csv_field(r.predicted.dump()) << ',' << csv_field(r.observed.dump()) << ','
       << (r.agree() ? "true" : "false") << ',' << csv_field(r.reason) << ',' << csv_field(ex) << ',' << r.elapsed
       << '\n';
  }
  return os.str();
}

ordered_json strip_elapsed(ordered_json j) {
  if (j.is_object()) {
    j.erase("elapsed");
    for (auto& [k, v] : j.items()) v = strip_elapsed(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_elapsed(v);
  }
  return j;
}

SearchResult run_search(const SearchRequest& req) {
  const Field F = Field::parse(req.field);
  const std::uint64_t q = F.q(), qm1 = q - 1, s = req.s;
  if (s < 1 || qm1 % s) throw ParseError("s = " + std::to_string(s) + " must divide q-1 = " + std::to_string(qm1));
  if (req.degree < 0) throw ParseError("degree bound must be non-negative");
  if (req.m < 1) throw ParseError("m must be positive");
  const std::uint64_t ell = qm1 / s;
  auto rs = req.r;
  if (rs.empty())
    for (std::uint64_t r = 1; r <= 2 * s; ++r) rs.push_back(r);

  // r survives when the h-independent conjuncts allow m
  struct RPlan {
    std::uint64_t r, m1, r1, s1, m2;
  };
  std::vector<RPlan> plans;
  for (auto r : rs) {
    if (r < 1) throw ParseError("r must be positive");
    const auto m1 = std::gcd(r, s);
    if (req.m > ell * m1 || req.m % m1) continue;
    const auto m2 = req.m / m1;
    if (s * (ell % m2) >= req.m) continue;
    plans.push_back({r, m1, r / m1, s / m1, m2});
  }

  // number of monic h of degree <= bound, saturating just above the budget
  const std::uint64_t cap = req.budget + 1;
  std::uint64_t polys = 0, qd = 1;
  for (int d = 0; d <= req.degree && polys < cap; ++d) {
    polys = std::min(cap, polys + qd);
    qd = qd > cap / q ? cap : qd * q;
  }
  SearchResult res;
  if (plans.empty()) return res;
  if (polys > req.budget / plans.size())
    throw BudgetError("search space of monic h of degree <= " + std::to_string(req.degree) + " times " +
                      std::to_string(plans.size()) + " exponents exceeds the budget of " +
                      std::to_string(req.budget) + " candidates");

  const auto units = F.unity_subgroup(ell);  // units[j] = g^(s j)
  std::vector<std::vector<Elem>> pw(static_cast<std::size_t>(req.degree) + 1, std::vector<Elem>(ell));
  for (std::size_t i = 0; i < pw.size(); ++i)
    for (std::size_t j = 0; j < ell; ++j) pw[i][j] = F.pow(units[j], i64(i));
  std::vector<Elem> vals(ell);
  std::vector<std::uint64_t> logs(ell), keys(ell);

  // log of a_j^r1 per exponent, and a fiber counter over exponents mod q-1
  std::vector<std::vector<std::uint64_t>> base_log(plans.size(), std::vector<std::uint64_t>(ell));
  for (std::size_t k = 0; k < plans.size(); ++k)
    for (std::size_t j = 0; j < ell; ++j) base_log[k][j] = plans[k].r1 * s % qm1 * j % qm1;
  std::vector<std::uint32_t> fiber(qm1, 0);

  auto g_passes = [&](std::size_t k) {
    const auto& rp = plans[k];
    for (std::size_t j = 0; j < ell; ++j) {
      keys[j] = (base_log[k][j] + rp.s1 * logs[j]) % qm1;
      ++fiber[keys[j]];
    }
    std::uint64_t full = 0;
    for (std::size_t j = 0; j < ell; ++j) {
      if (fiber[keys[j]] == rp.m2) ++full;
    }
    for (std::size_t j = 0; j < ell; ++j) fiber[keys[j]] = 0;
    return full == (ell / rp.m2) * rp.m2;
  };

  for (int d = 0; d <= req.degree; ++d) {
    std::vector<std::uint32_t> digits(static_cast<std::size_t>(d), 0);
    for (std::size_t j = 0; j < ell; ++j) vals[j] = pw[static_cast<std::size_t>(d)][j];
    while (true) {
      ++res.candidates;
      bool rootless = true;
      for (std::size_t j = 0; j < ell && rootless; ++j) rootless = vals[j].v != 0;
      if (rootless) {
        ++res.rootless;
        for (std::size_t j = 0; j < ell; ++j) logs[j] = F.log(vals[j]);
        for (std::size_t k = 0; k < plans.size(); ++k) {
          const auto& rp = plans[k];
          if (!g_passes(k)) continue;
          std::vector<Elem> c;
          for (auto v : digits) c.push_back({v});
          c.push_back(F.one());
          Poly h(F, std::move(c));
          CycloForm form(h, rp.r, s);
          auto pred = main_predict(form, req.m);
          if (!pred.verdict) continue;
          ++res.total_hits;
          const bool ok = check_m_to_1(literal_units(F, rp.r, s, h), req.m).verdict;
          res.hits.push_back({rp.r, std::move(h), std::move(pred), ok});
        }
      }
      // odometer over the non-leading coefficients, updating h on U_ell in place
      std::size_t i = 0;
      for (; i < digits.size(); ++i) {
        const Elem before{digits[i]};
        const Elem after{digits[i] + 1 < q ? digits[i] + 1 : 0};
        const Elem delta = F.sub(after, before);
        for (std::size_t j = 0; j < ell; ++j) vals[j] = F.add(vals[j], F.mul(delta, pw[i][j]));
        digits[i] = after.v;
        if (after.v != 0) break;
      }
      if (i == digits.size()) break;
    }
  }
  res.candidates *= plans.size();

  std::sort(res.hits.begin(), res.hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.r != b.r) return a.r < b.r;
    if (a.h.degree() != b.h.degree()) return a.h.degree() < b.h.degree();
    const auto& ca = a.h.coeffs();
    const auto& cb = b.h.coeffs();
    return std::lexicographical_compare(ca.rbegin(), ca.rend(), cb.rbegin(), cb.rend());
  });
  if (req.limit && res.hits.size() > req.limit) res.hits.resize(req.limit);
  return res;
}

ordered_json search_json(const SearchRequest& req, const SearchResult& res) {
  ordered_json j;
  j["schema"] = "manyone-search/1";
  j["field"] = Field::parse(req.field).spec().to_string();
  j["s"] = req.s;
  j["degree"] = req.degree;
  j["m"] = req.m;
  j["candidates"] = res.candidates;
  j["rootless"] = res.rootless;
  j["total_hits"] = res.total_hits;
  auto hits = ordered_json::array();
  for (const auto& h : res.hits) {
    ordered_json o;
    o["r"] = h.r;
    o["h"] = h.h.to_string();
    o["reason"] = h.prediction.reason;
    o["verified"] = h.verified;
    hits.push_back(std::move(o));
  }
  j["hits"] = std::move(hits);
  return j;
}

BigInt count_by_enumeration(std::uint64_t q, std::uint64_t m) {
  if (q < 1) throw std::invalid_argument("q must be positive");
  if (m < 1 || m > q) return 0;
  return enumerate_counts(q)[m];
}

ordered_json count_table(const std::vector<std::uint64_t>& qs, const std::vector<std::uint64_t>& ms, bool enumerate,
                         std::uint64_t enumerate_budget) {
  ordered_json j;
  j["schema"] = "manyone-count/1";
  auto rows = ordered_json::array();
  for (auto q : qs) {
    if (q < 1) throw ParseError("q must be positive");
    std::vector<std::uint64_t> counts;
    if (enumerate) {
      if (self_maps(q) > enumerate_budget)
        throw BudgetError("enumerating " + std::to_string(q) + "^" + std::to_string(q) + " maps exceeds the budget");
      counts = enumerate_counts(q);
    }
    std::vector<std::uint64_t> mm = ms;
    if (mm.empty())
      for (std::uint64_t m = 1; m <= q; ++m) mm.push_back(m);
    for (auto m : mm) {
      ordered_json row;
      row["q"] = q;
      row["m"] = m;
      const auto formula = count_formula(q, m);
      row["formula"] = formula.str();
      if (enumerate) {
        const BigInt e = m <= q ? BigInt(counts[m]) : BigInt(0);
        row["enumerated"] = e.str();
        row["agree"] = e == formula;
      }
      rows.push_back(std::move(row));
    }
  }
  j["counts"] = std::move(rows);
  return j;
}

}  // namespace manyone
