#pragma once

// Towers f = x^r H(x^(q-1))^m1 over F_(q^2) built from maps on U_(q+1) and F_q ∪ {∞}.

#include <cstdint>
#include <optional>
#include <string>

#include "manyone/cyclotomic.hpp"
#include "manyone/unitline.hpp"

namespace manyone {

// L = eps x^t M^q on U_(q+1), M rootless there, t >= deg M, L/M permutes U_(q+1).
struct UnitPair {
  Poly L, M;
  Elem eps;
  std::uint64_t t = 1;
};
// L = eps x^t L^q and M = eps x^t M^q on U_(q+1), t >= max(deg L, deg M),
// L/M a bijection from U_(q+1) onto F_q ∪ {∞}.
struct LinePair {
  Poly L, M;
  Elem eps;
  std::uint64_t t = 1;
};

// Each throws HypothesisError naming the first failing point.
void check_unit_pair(const UnitPair& p);
void check_line_pair(const LinePair& p);

UnitPair unit_pair_from(const Deg1Map& map);  // needs the unit-circle shape, t = 1
LinePair line_pair_from(const Deg1Map& map);  // needs the line shape, t = 1
// (L(x^k), M(x^k)) with t scaled by k; (k, q+1) = 1 keeps bijectivity.
UnitPair stretch(const UnitPair& p, std::uint64_t k);
LinePair stretch(const LinePair& p, std::uint64_t k);

enum class TowerKind {
  unit,  // verdict m1 | m and (n, q+1) = m/m1
  line,  // verdict (m = m1, (n, q-1) = 1) or (m1 | m, (n, q-1) = m/m1 >= 3, 2(q-1) < m)
  gbar,  // only m = m1: verdict alpha + alpha^q = 1
};

struct TowerInstance {
  std::string family;
  TowerKind kind = TowerKind::unit;
  Poly H;                        // rootless on U_(q+1)
  std::uint64_t n = 1;
  std::uint64_t twist = 0;       // r/m1 must be congruent to this mod q+1
  bool short_range = false;      // m <= min(2(q-1), m1(q+1))
  bool gbar_condition = false;
};

// H = M1^(n t2) (M2 ∘ x^n ∘ L1/M1)
TowerInstance unit_tower(const UnitPair& p1, const UnitPair& p2, std::uint64_t n);
// H = alpha L^n + beta M^n, alpha^(q+1) != beta^(q+1)
TowerInstance r1_tower(const UnitPair& p, Elem alpha, Elem beta, std::uint64_t n);
// R1 with L = delta^q x + gamma^q, M = gamma x + delta
TowerInstance r1l1_tower(const Field& F, Elem alpha, Elem beta, Elem gamma, Elem delta, std::uint64_t n);
// R1 with L = x^5 + x^4 + x, M = x^4 + x + 1; q = 2^s, s != 2 mod 4
TowerInstance r1l5_tower(const Field& F, Elem alpha, Elem beta, std::uint64_t n);
// H = L^(3n) + L^n M^(2n) + c M^(3n), q even, c in F_q^*, Tr(1 + 1/c) = 0
TowerInstance r3_tower(const UnitPair& p, Elem c, std::uint64_t n);
// R3 with L = beta^q x + alpha^q, M = alpha x + beta
TowerInstance r3l1_tower(const Field& F, Elem alpha, Elem beta, Elem c, std::uint64_t n);

// H = M^(nu) (N ∘ x^n ∘ L/M), u = deg N, N^(q)/N a bijection F_q ∪ {∞} -> U_(q+1)
TowerInstance line_tower(const LinePair& p, const Poly& N, std::uint64_t n);
// H = alpha L^n + beta M^n, alpha, beta nonzero, alpha^(q-1) != beta^(q-1)
TowerInstance fq_r1_tower(const LinePair& p, Elem alpha, Elem beta, std::uint64_t n);
// H = alpha (gamma x + gamma^q)^n + beta (delta x + delta^q)^n
TowerInstance fq_r1l1_tower(const Field& F, Elem alpha, Elem beta, Elem gamma, Elem delta, std::uint64_t n);
// H = gamma (alpha L^n + beta M^n)^k + delta (alpha^q L^n + beta^q M^n)^k, (k, q+1) = 1, gamma^(q+1) != delta^(q+1)
TowerInstance fq_rk_tower(const LinePair& p, Elem alpha, Elem beta, Elem gamma, Elem delta, std::uint64_t n,
                          std::uint64_t k);
// Rk with L = x + 1, M = theta x + theta^q, alpha = gamma = 1
TowerInstance fq_rkl1_tower(const Field& F, Elem beta, Elem theta, Elem delta, std::uint64_t n, std::uint64_t k);
// H = h2^u (N ∘ gbar ∘ L/M), gbar = x + 1/(x + alpha) + 1/(x + alpha^q), q even, alpha not in F_q
TowerInstance gbar_tower(const LinePair& p, const Poly& N, Elem alpha);

// gbar as a rational map, and the line-permutation question it answers.
RationalMap gbar_map(const Field& F, Elem alpha);
bool permutes_line(const RationalMap& map);

// Smallest r with (r, q-1) = m1 and r/m1 = twist mod q+1; nullopt if none below m1 (q^2 - 1).
std::optional<std::uint64_t> tower_exponent(const TowerInstance& inst, std::uint64_t m1);
// x^r H(x^(q-1))^m1 evaluated literally on F_(q^2)^*; HypothesisError if r misses the congruence.
FiniteMapping tower_map(const TowerInstance& inst, std::uint64_t r);
CycloForm tower_form(const TowerInstance& inst, std::uint64_t r);
std::size_t tower_max_m(const TowerInstance& inst, std::uint64_t r);
// std::out_of_range outside 1..tower_max_m (only m = m1 for gbar).
Prediction tower_predict(const TowerInstance& inst, std::uint64_t r, std::size_t m);

// Generic reduction through surjective lambda: U_ell -> S, lambda_bar defined on the image of g,
// and gbar: S -> S_bar with lambda_bar ∘ g = gbar ∘ lambda. Hypotheses are verified by scan.
Prediction third_problem_predict(const CycloForm& form, const FiniteMapping& lambda, const FiniteMapping& lambda_bar,
                                 const FiniteMapping& gbar, std::size_t m);

}  // namespace manyone
