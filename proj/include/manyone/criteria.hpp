#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "manyone/galois.hpp"
#include "manyone/multiplicity.hpp"

namespace manyone {

// Both sides of an equivalence, computed independently.
struct CriterionReport {
  bool lhs = false;
  bool rhs = false;
  bool agree() const { return lhs == rhs; }
};

//   A    --f-->    Abar
//   |lambda         |lambdabar
//   S    --fbar--> Sbar
struct CommutativeSquare {
  std::vector<Point> A, Abar, S, Sbar;
  FiniteMapping f, fbar, lambda, lambdabar;

  // Domains and targets match the declared sets and lambdabar∘f = fbar∘lambda.
  // Throws HypothesisError with the first offending point.
  void validate() const;
};

class GroupModel {
 public:
  // table[i][j] is elements[i] * elements[j]. Axioms are checked exhaustively up to 64
  // elements; larger models need trusted = true. At most 4096 elements.
  GroupModel(std::vector<Point> elements, std::vector<std::vector<Point>> table, bool trusted = false);

  static GroupModel cyclic(std::size_t n);         // Z/n on points 0..n-1
  static GroupModel multiplicative(const Field&);  // F_q^*, points are element encodings

  const std::vector<Point>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(Point a) const;
  Point op(Point a, Point b) const { return table_[pos(a) * size() + pos(b)]; }
  Point identity() const { return identity_; }
  Point inverse(Point a) const { return inverse_[pos(a)]; }

 private:
  std::size_t pos(Point a) const;
  std::vector<Point> elements_;
  std::vector<std::pair<Point, std::uint32_t>> index_;
  std::vector<Point> table_;
  std::vector<Point> inverse_;
  Point identity_ = 0;
};

// f: A -> B, psi: B -> C.
CriterionReport local_criterion_check(const FiniteMapping& f, const FiniteMapping& psi, std::size_t m);

CriterionReport construction1_verdict(const CommutativeSquare& sq, std::size_t m);

// Throws HypothesisError unless lambda is onto S, #lambda^-1(s) = m1 #lambdabar^-1(fbar(s))
// and f is m1-to-1 on every lambda^-1(s).
void require_construction2_hypotheses(const CommutativeSquare& sq, std::size_t m1);
CriterionReport construction2_verdict(const CommutativeSquare& sq, std::size_t m1, std::size_t m);

// lhs: f*u is m-to-1 on A; rhs: f is m-to-1 on A. Variant 1 ignores m1.
CriterionReport construction3_verdict(const GroupModel& group, const CommutativeSquare& sq,
                                      const FiniteMapping& u, int variant, std::size_t m, std::size_t m1 = 1);

}  // namespace manyone
