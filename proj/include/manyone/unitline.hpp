#pragma once

// Maps on the unit circle U_(q+1) of F_(q^2) and on the projective line F_q ∪ {∞}.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "manyone/cyclotomic.hpp"
#include "manyone/galois.hpp"
#include "manyone/multiplicity.hpp"
#include "manyone/poly.hpp"

namespace manyone {

// Field helpers for F = F_(q^2). All of them require an even extension degree.
std::uint64_t half_order(const Field& F);             // q
Elem conj(const Field& F, Elem x);                     // x^q
std::vector<Elem> unit_circle(const Field& F);         // U_(q+1), by discrete log
std::vector<Elem> base_line(const Field& F);           // F_q, canonical order
Elem base_trace(const Field& F, Elem c);               // Tr_(q/p), c in F_q
Field quadratic_field(std::uint32_t p, unsigned k);    // F_(p^(2k)) with the default modulus

class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  explicit ProjectivePoint(Elem x) : x_(x) {}
  static ProjectivePoint infinity() {
    ProjectivePoint p;
    p.inf_ = true;
    return p;
  }

  bool is_infinity() const { return inf_; }
  Elem value() const;  // throws on ∞
  friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.x_ == b.x_);
  }

  // ∞ is encoded as the field order, past every element code.
  Point encode(const Field& F) const { return inf_ ? F.q() : x_.v; }
  static ProjectivePoint decode(const Field& F, Point p) { return p == F.q() ? infinity() : ProjectivePoint(Elem{p}); }
  std::string to_string(const Field& F) const { return inf_ ? "inf" : F.format(x_); }

 private:
  bool inf_ = false;
  Elem x_{};
};

// num/den. At a common root evaluation throws std::domain_error.
class RationalMap {
 public:
  RationalMap(Poly num, Poly den);
  // "num/den", each side in the Poly coefficient format; a bare "num" means den = 1.
  static RationalMap parse(const Field& F, std::string_view text);

  const Field& field() const { return num_.field(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  ProjectivePoint operator()(ProjectivePoint x) const;
  ProjectivePoint operator()(Elem x) const { return (*this)(ProjectivePoint(x)); }
  // Tabulated on `domain`; images use ProjectivePoint::encode.
  FiniteMapping on(const std::vector<Elem>& domain) const;
  std::string to_string() const;

 private:
  Poly num_, den_;
};

// (a x + b)/(c x + d) with ad != bc.
class Deg1Map {
 public:
  Deg1Map(Field F, Elem a, Elem b, Elem c, Elem d);
  // (beta^q x + alpha^q)/(alpha x + beta)
  static Deg1Map unit_form(const Field& F, Elem alpha, Elem beta);
  // (beta x + beta^q)/(alpha x + alpha^q)
  static Deg1Map line_form(const Field& F, Elem alpha, Elem beta);

  const Field& field() const { return f_; }
  std::array<Elem, 4> coeffs() const { return {a_, b_, c_, d_}; }
  ProjectivePoint operator()(ProjectivePoint x) const;
  ProjectivePoint operator()(Elem x) const { return (*this)(ProjectivePoint(x)); }
  Deg1Map then(const Deg1Map& outer) const;  // outer ∘ this
  Deg1Map inverse() const;
  RationalMap rational() const;

 private:
  Field f_;
  Elem a_, b_, c_, d_;
};

// Shape tests: the map equals a scalar multiple of the unit or line form with admissible alpha, beta.
bool deg1_permutes_unit(const Deg1Map& map);
bool deg1_unit_to_line(const Deg1Map& map);
// The same questions for a raw (alpha, beta) pair, false when the pair makes the map degenerate.
bool unit_pair_permutes(const Field& F, Elem alpha, Elem beta);
bool line_pair_bijective(const Field& F, Elem alpha, Elem beta);

// Exhaustive counterparts.
bool permutes_unit_circle(const RationalMap& map);
bool maps_unit_circle_onto_line(const RationalMap& map);
bool maps_line_onto_unit_circle(const RationalMap& map);
bool rootless_on_unit_circle(const Poly& P);
// (P(x))^q = P^(q)(1/x) for every x in U_(q+1).
bool conjugation_law_holds(const Poly& P);

// One predicted-vs-scanned comparison inside a family record.
struct FamilyCheck {
  std::string map;
  std::size_t m = 1;
  bool predicted = false;
  bool observed = false;
  std::vector<Point> exceptional_set;
  bool agree() const { return predicted == observed; }
};

struct FamilyRecord {
  std::string family;
  std::string parameters;
  std::vector<FamilyCheck> checks;
  bool agree() const;
};

// A_i = {c in F_q^* : Tr(1/c) = i} with the fibers {a, 1/a} of a -> a + 1/a over each c.
struct HalfplaneSplit {
  std::vector<Elem> A0, A1;
  std::vector<std::array<Elem, 2>> fibers0, fibers1;  // fibersI[j] lies over AI[j]
  bool two_to_one_onto_A0 = false;  // from F_q \ {0, 1}
  bool two_to_one_onto_A1 = false;  // from U_(q+1) \ {1}
};
HalfplaneSplit halfplane_split(const Field& F);

// (x^5 + x^2 + x)/(x^4 + x^3 + 1)
RationalMap quintic_G(const Field& F);

// q = 2^n, c in F_q^*. g = (c x^3 + x^2 + 1)/(x^3 + x + c) on U_(q+1), g1 for even n, and
// with full_scans the two trinomials x^(3q) + x^(q+2) + c x^3 and c x^(3q) + x^(2q+1) + x^3 on F_(q^2)^*.
FamilyRecord g3_family(const Field& F, Elem c, bool full_scans = true);
// g = (x^4 + x + 1)/(x^5 + x^4 + x) on U_(q+1), plus f1, f2, the 3-to-1 trinomial and the two 5-to-1 trinomials.
FamilyRecord g5_family(const Field& F, bool full_scans = true);

// Trinomial f with the cubic h (shape 0: x^3 + x + c, shape 1: c x^3 + x^2 + 1), as x^3 h(x^(q-1)).
CycloForm g3_trinomial(const Field& F, Elem c, int shape);
// shape 0: x^(4q+1) + x^(q+4) + x^5, shape 1: x^(5q) + x^(4q+1) + x^(q+4).
CycloForm g5_trinomial(const Field& F, int shape);

// F = x^(kt) M(x^(q-1))^k f with M = eps x^t M^q on U_(q+1), deg M <= t <= 2 deg M and
// (r, q-1) = (r + kt, q-1) = 1. Checks m = 1..q+1 for F against the verdicts of f.
FamilyRecord unit_transfer(const CycloForm& f, const Poly& M, Elem eps, std::uint64_t t, std::uint64_t k);
// The h_d instances: M = h_d, t = d-1, eps = 1, with each theorem's side conditions.
FamilyRecord f3_transfer(const Field& F, Elem c, int shape, std::uint64_t d, std::uint64_t k);
FamilyRecord f5_transfer(const Field& F, int shape, std::uint64_t d, std::uint64_t k);

}  // namespace manyone
