#include "manyone/criteria.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace manyone {

namespace {

std::vector<Point> sorted_unique(std::vector<Point> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool member(const std::vector<Point>& sorted, Point x) { return std::binary_search(sorted.begin(), sorted.end(), x); }

void require_map(const FiniteMapping& g, const std::vector<Point>& from, const std::vector<Point>& to,
                 const char* name) {
  if (sorted_unique(g.domain()) != sorted_unique(from))
    throw HypothesisError(std::string(name) + " is not defined exactly on its source set");
  const auto target = sorted_unique(to);
  for (auto y : g.images())
    if (!member(target, y))
      throw HypothesisError(std::string(name) + " leaves its target set at image " + std::to_string(y));
}

// Points of f's domain grouped by the value of key, in first-seen order.
std::vector<std::vector<Point>> classes_by(const FiniteMapping& f, const FiniteMapping& key) {
  std::map<Point, std::size_t> slot;
  std::vector<std::vector<Point>> out;
  for (auto a : f.domain()) {
    auto k = key.at(a);
    auto [it, fresh] = slot.emplace(k, out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(a);
  }
  return out;
}

// Right side shared by the local criterion and Construction 1: f is m-to-1 on every class
// of size >= m, and the exceptional points plus the small classes add up to #A mod m.
bool fiberwise_side(const FiniteMapping& f, const std::vector<std::vector<Point>>& classes, std::size_t m) {
  std::size_t sum = 0;
  for (const auto& cls : classes) {
    if (cls.size() >= m) {
      auto rep = check_m_to_1(f.restrict_to(cls), m);
      if (!rep.verdict) return false;
      sum += rep.exceptional_set.size();
    } else {
      sum += cls.size();
    }
  }
  return sum == f.size() % m;
}

std::size_t count_preimages(const FiniteMapping& g, Point y) {
  return static_cast<std::size_t>(std::count(g.images().begin(), g.images().end(), y));
}

void require_range(std::size_t m, std::size_t hi) {
  if (m < 1 || m > hi)
    throw std::out_of_range("m = " + std::to_string(m) + " outside 1.." + std::to_string(hi));
}

}  // namespace

void CommutativeSquare::validate() const {
  require_map(f, A, Abar, "f");
  require_map(fbar, S, Sbar, "fbar");
  require_map(lambda, A, S, "lambda");
  require_map(lambdabar, Abar, Sbar, "lambdabar");
  for (auto a : A)
    if (lambdabar.at(f.at(a)) != fbar.at(lambda.at(a)))
      throw HypothesisError("square does not commute at point " + std::to_string(a));
}

GroupModel::GroupModel(std::vector<Point> elements, std::vector<std::vector<Point>> table, bool trusted)
    : elements_(std::move(elements)) {
  const auto n = elements_.size();
  if (n == 0) throw std::invalid_argument("empty group");
  if (n > 4096) throw ScaleError("group models are limited to 4096 elements");
  if (n > 64 && !trusted) throw ScaleError("group models above 64 elements must be marked trusted");
  if (table.size() != n) throw std::invalid_argument("operation table has the wrong size");
  for (std::uint32_t i = 0; i < n; ++i) index_.emplace_back(elements_[i], i);
  std::sort(index_.begin(), index_.end());
  for (std::size_t i = 1; i < n; ++i)
    if (index_[i].first == index_[i - 1].first) throw std::invalid_argument("duplicate group element");
  table_.reserve(n * n);
  for (const auto& row : table) {
    if (row.size() != n) throw std::invalid_argument("operation table has the wrong size");
    for (auto c : row) {
      if (!contains(c)) throw HypothesisError("operation is not closed");
      table_.push_back(c);
    }
  }
  bool found = false;
  for (auto e : elements_) {
    bool ok = true;
    for (auto a : elements_) ok = ok && op(e, a) == a && op(a, e) == a;
    if (ok) {
      identity_ = e;
      found = true;
      break;
    }
  }
  if (!found) throw HypothesisError("no identity element");
  inverse_.assign(n, identity_);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::find_if(elements_.begin(), elements_.end(),
                           [&](Point b) { return op(elements_[i], b) == identity_ && op(b, elements_[i]) == identity_; });
    if (it == elements_.end()) throw HypothesisError("element without inverse");
    inverse_[i] = *it;
  }
  if (!trusted)
    for (auto a : elements_)
      for (auto b : elements_)
        for (auto c : elements_)
          if (op(op(a, b), c) != op(a, op(b, c))) throw HypothesisError("operation is not associative");
}

GroupModel GroupModel::cyclic(std::size_t n) {
  std::vector<Point> el(n);
  std::vector<std::vector<Point>> t(n, std::vector<Point>(n));
  for (std::size_t i = 0; i < n; ++i) {
    el[i] = static_cast<Point>(i);
    for (std::size_t j = 0; j < n; ++j) t[i][j] = static_cast<Point>((i + j) % n);
  }
  return GroupModel(std::move(el), std::move(t), n > 64);
}

GroupModel GroupModel::multiplicative(const Field& field) {
  auto nz = field.nonzero();
  std::vector<Point> el;
  for (auto x : nz) el.push_back(x.v);
  std::vector<std::vector<Point>> t(nz.size(), std::vector<Point>(nz.size()));
  for (std::size_t i = 0; i < nz.size(); ++i)
    for (std::size_t j = 0; j < nz.size(); ++j) t[i][j] = field.mul(nz[i], nz[j]).v;
  return GroupModel(std::move(el), std::move(t), nz.size() > 64);
}

bool GroupModel::contains(Point a) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), std::pair<Point, std::uint32_t>{a, 0});
  return it != index_.end() && it->first == a;
}

std::size_t GroupModel::pos(Point a) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), std::pair<Point, std::uint32_t>{a, 0});
  if (it == index_.end() || it->first != a) throw std::out_of_range("point outside the group");
  return it->second;
}

CriterionReport local_criterion_check(const FiniteMapping& f, const FiniteMapping& psi, std::size_t m) {
  require_range(m, f.size());
  const auto phi = f.then(psi);
  CriterionReport rep;
  rep.lhs = check_m_to_1(f, m).verdict;
  rep.rhs = fiberwise_side(f, classes_by(f, phi), m);
  return rep;
}

CriterionReport construction1_verdict(const CommutativeSquare& sq, std::size_t m) {
  sq.validate();
  if (!sq.fbar.injective()) throw HypothesisError("fbar is not injective on S");
  require_range(m, sq.f.size());
  CriterionReport rep;
  rep.lhs = check_m_to_1(sq.f, m).verdict;
  // Classes with fewer than m points contribute only to the sum; if no class reaches m
  // the per-class condition holds vacuously.
  rep.rhs = fiberwise_side(sq.f, classes_by(sq.f, sq.lambda), m);
  return rep;
}

void require_construction2_hypotheses(const CommutativeSquare& sq, std::size_t m1) {
  sq.validate();
  if (m1 < 1) throw HypothesisError("m1 must be positive");
  if (sq.lambda.image_set() != sorted_unique(sq.S)) throw HypothesisError("lambda is not onto S");
  for (auto s : sq.S) {
    const auto fiber = sq.lambda.preimage(s);
    const auto below = count_preimages(sq.lambdabar, sq.fbar.at(s));
    if (fiber.size() != m1 * below)
      throw HypothesisError("fiber size condition fails over point " + std::to_string(s));
    if (!check_m_to_1(sq.f.restrict_to(fiber), m1).verdict)
      throw HypothesisError("f is not m1-to-1 on the fiber over point " + std::to_string(s));
  }
}

CriterionReport construction2_verdict(const CommutativeSquare& sq, std::size_t m1, std::size_t m) {
  require_construction2_hypotheses(sq, m1);
  require_range(m, m1 * sq.S.size());
  CriterionReport rep;
  rep.lhs = check_m_to_1(sq.f, m).verdict;
  if (m % m1 == 0) {
    auto low = check_m_to_1(sq.fbar, m / m1);
    if (low.verdict) {
      std::size_t sum = 0;
      for (auto s : low.exceptional_set) sum += sq.lambda.preimage(s).size();
      rep.rhs = sum == sq.f.size() % m;
    }
  }
  return rep;
}

CriterionReport construction3_verdict(const GroupModel& group, const CommutativeSquare& sq, const FiniteMapping& u,
                                      int variant, std::size_t m, std::size_t m1) {
  sq.validate();
  const auto A = sorted_unique(sq.A);
  if (A != sorted_unique(group.elements()) || sorted_unique(sq.Abar) != A)
    throw HypothesisError("A and Abar must both be the group");
  for (auto s : sq.S)
    if (!group.contains(s)) throw HypothesisError("S is not a subset of the group");
  for (auto s : sq.Sbar)
    if (!group.contains(s)) throw HypothesisError("Sbar is not a subset of the group");
  for (auto a : A)
    for (auto b : A)
      if (sq.lambdabar.at(group.op(a, b)) != group.op(sq.lambdabar.at(a), sq.lambdabar.at(b)))
        throw HypothesisError("lambdabar is not a homomorphism");
  if (sq.lambdabar.image_set() != sorted_unique(sq.Sbar)) throw HypothesisError("lambdabar is not onto Sbar");
  require_map(u, sq.A, A, "u");
  const Point c = sq.lambdabar.at(u.at(A.front()));
  for (auto a : A)
    if (sq.lambdabar.at(u.at(a)) != c) throw HypothesisError("lambdabar(u(a)) is not constant");

  const auto fu = FiniteMapping::tabulate(sq.A, [&](Point a) { return group.op(sq.f.at(a), u.at(a)); });
  if (variant == 1) {
    if (!sq.fbar.injective()) throw HypothesisError("fbar is not injective on S");
    for (auto a : A)
      for (auto b : A)
        if (sq.lambda.at(a) == sq.lambda.at(b) && u.at(a) != u.at(b))
          throw HypothesisError("u does not factor through lambda");
    require_range(m, A.size());
  } else if (variant == 2) {
    require_construction2_hypotheses(sq, m1);
    CommutativeSquare shifted = sq;
    shifted.f = fu;
    shifted.fbar = FiniteMapping::tabulate(sq.S, [&](Point s) { return group.op(sq.fbar.at(s), c); });
    require_construction2_hypotheses(shifted, m1);
    require_range(m, m1 * sq.S.size());
  } else {
    throw std::invalid_argument("variant must be 1 or 2");
  }
  CriterionReport rep;
  rep.lhs = check_m_to_1(fu, m).verdict;
  rep.rhs = check_m_to_1(sq.f, m).verdict;
  return rep;
}

}  // namespace manyone
