#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "manyone/galois.hpp"
#include "manyone/multiplicity.hpp"
#include "manyone/poly.hpp"

namespace manyone {

// f(x) = x^r h(x^s) over F_q with s | q-1 and h free of roots in U_ell, ell = (q-1)/s.
// Construction rejects forms that violate either condition.
class CycloForm {
 public:
  CycloForm(Poly h, std::uint64_t r, std::uint64_t s);

  const Field& field() const { return h_.field(); }
  const Poly& h() const { return h_; }
  std::uint64_t r() const { return r_; }
  std::uint64_t s() const { return s_; }
  std::uint64_t ell() const { return ell_; }

  Elem operator()(Elem x) const;
  // h on U_ell, indexed by j for the point g^(s j).
  const std::vector<Elem>& h_on_units() const { return hU_; }
  FiniteMapping on_units() const;  // f on F_q^*, canonical order
  FiniteMapping on_field() const;  // f on F_q
  std::string to_string() const;

 private:
  Poly h_;
  std::uint64_t r_ = 1, s_ = 1, ell_ = 1;
  std::vector<Elem> hU_;
};

struct CycloDecomposition {
  std::uint64_t m1 = 1, r1 = 1, s1 = 1, ell = 1;
  std::vector<Elem> units;  // U_ell by discrete log
  FiniteMapping g;          // a -> a^r1 h(a)^s1 on U_ell
};

// Throws std::logic_error if x^s1 ∘ f = g ∘ x^s fails anywhere on F_q^*.
CycloDecomposition decompose(const CycloForm& form);

// verdict plus the case that held, or the conjunct that failed.
struct Prediction {
  bool verdict = false;
  std::string reason;
};

// m in 1..ell*m1, else std::out_of_range.
Prediction main_predict(const CycloForm& form, std::size_t m);
Prediction main_predict(const CycloForm& form, const CycloDecomposition& dec, std::size_t m);

// m-to-1 on all of F_q, derived from F_q^* plus the m | q test.
bool fq_bridge(const CycloForm& form, std::size_t m);
// Same for an arbitrary polynomial; HypothesisError unless 0 is its only root.
bool fq_bridge(const Poly& f, std::size_t m);

// m in {2, 3}; needs s >= 2 and ell >= m.
Prediction small_m_predict(const CycloForm& form, std::size_t m);
// ell in {2, 3}; m in 1..ell*m1.
Prediction small_ell_predict(const CycloForm& form, std::size_t m);

// Requires h(a)^s1 = beta a^t on U_ell, checked pointwise.
Prediction monomial_predict(const CycloForm& form, Elem beta, std::int64_t t, std::size_t m);
// (beta, t) read off at 1 and a generator of U_ell, then verified on all of U_ell.
std::optional<std::pair<Elem, std::int64_t>> infer_monomial(const CycloForm& form);

// Drops exponents mod ell: the result agrees with p on U_ell.
Poly reduce_mod_unity(const Poly& p, std::uint64_t ell);

// h_d(x^e) has no roots in U_ell, via the gcd criterion and via a scan.
bool hd_rootless_criterion(std::uint32_t p, std::uint64_t ell, std::uint64_t d, std::uint64_t e);
bool hd_rootless_scan(const Field& field, std::uint64_t ell, std::uint64_t d, std::uint64_t e);

// f = x^r h(x^s) over F_{q^n} with h = h_d(x^e)^t H(h_k(x^e)^ell0), ell0 = ell/(ell, k-1).
// H defaults to 1 and must have coefficients in F_q.
struct HdFamily {
  Field field;
  unsigned n = 1;
  std::uint64_t ell = 1, s = 1, r = 1, d = 1, e = 1, t = 1;
  std::optional<Poly> H;
  std::uint64_t k = 1;
};

CycloForm hd_form(const HdFamily& fam);
// ell m1 | (q-1, n): f is m1-to-1. n even, ell m1 | q+1: gcd formula. Otherwise HypothesisError.
Prediction hd_family_predict(const HdFamily& fam, std::size_t m);

// F = x^(kt) M(x^s)^k f with eps x^t M(x)^s = 1 on U_ell and f a permutation of F_q.
struct LiftedFamily {
  CycloForm F;
  std::size_t multiplicity;  // (r + kt, s)
};
LiftedFamily lift_from_permutation(const CycloForm& f, const Poly& M, Elem eps, std::uint64_t t, std::uint64_t k);

// F = x^(kt) M(x^s)^k f under (r,s) | t, (r,s) = (r+kt,s) and eps x^(t/m1) M(x)^(s/m1) = 1 on U_ell.
// For every m in 1..ell*m1, F is m-to-1 on F_q^* exactly when f is.
CycloForm transfer_family(const CycloForm& f, const Poly& M, Elem eps, std::uint64_t t, std::uint64_t k);

}  // namespace manyone
