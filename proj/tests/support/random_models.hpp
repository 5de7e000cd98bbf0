#pragma once

// Hand-rolled generators for small abstract models: random maps, commutative squares that
// satisfy the construction hypotheses by design, and cyclic-group instances.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "manyone/criteria.hpp"
#include "manyone/galois.hpp"
#include "manyone/multiplicity.hpp"

namespace manyone::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<Point> range_points(Point first, std::size_t n) {
  std::vector<Point> v(n);
  std::iota(v.begin(), v.end(), first);
  return v;
}

inline FiniteMapping random_map(Rng& rng, const std::vector<Point>& dom, const std::vector<Point>& cod) {
  return FiniteMapping::tabulate(dom, [&](Point) { return cod[uniform(rng, 0, cod.size() - 1)]; });
}

struct LocalInstance {
  FiniteMapping f, psi;
};

inline LocalInstance random_local(Rng& rng) {
  auto A = range_points(0, uniform(rng, 1, 12));
  auto B = range_points(100, uniform(rng, 1, 12));
  auto C = range_points(200, uniform(rng, 1, 12));
  return {random_map(rng, A, B), random_map(rng, B, C)};
}

// fbar injective on S.
inline CommutativeSquare random_c1_square(Rng& rng) {
  CommutativeSquare sq;
  sq.S = range_points(200, uniform(rng, 1, 6));
  sq.Sbar = range_points(300, uniform(rng, sq.S.size(), 8));
  auto targets = sq.Sbar;
  std::shuffle(targets.begin(), targets.end(), rng);
  sq.fbar = FiniteMapping(sq.S, {targets.begin(), targets.begin() + static_cast<long>(sq.S.size())});
  // every Sbar point gets 1..2 preimages in Abar
  std::vector<Point> lb_img;
  for (auto sb : sq.Sbar)
    for (std::size_t j = 0, c = uniform(rng, 1, 2); j < c; ++j) lb_img.push_back(sb);
  sq.Abar = range_points(100, lb_img.size());
  std::shuffle(lb_img.begin(), lb_img.end(), rng);
  sq.lambdabar = FiniteMapping(sq.Abar, lb_img);
  sq.A = range_points(0, uniform(rng, 1, 12));
  sq.lambda = random_map(rng, sq.A, sq.S);
  sq.f = FiniteMapping::tabulate(sq.A, [&](Point a) {
    auto options = sq.lambdabar.preimage(sq.fbar.at(sq.lambda.at(a)));
    return options[uniform(rng, 0, options.size() - 1)];
  });
  return sq;
}

// Satisfies the Construction 2 hypotheses for the returned m1; at most 12 points in A.
inline std::pair<CommutativeSquare, std::size_t> random_c2_square(Rng& rng) {
  while (true) {
    CommutativeSquare sq;
    const std::size_t m1 = uniform(rng, 1, 3);
    sq.S = range_points(200, uniform(rng, 1, 4));
    sq.Sbar = range_points(300, uniform(rng, 1, 4));
    sq.fbar = random_map(rng, sq.S, sq.Sbar);
    std::vector<Point> lb_img;
    for (auto sb : sq.Sbar)
      for (std::size_t j = 0, c = uniform(rng, 1, 2); j < c; ++j) lb_img.push_back(sb);
    std::shuffle(lb_img.begin(), lb_img.end(), rng);
    sq.Abar = range_points(100, lb_img.size());
    sq.lambdabar = FiniteMapping(sq.Abar, lb_img);
    std::size_t total = 0;
    for (auto s : sq.S) total += m1 * sq.lambdabar.preimage(sq.fbar.at(s)).size();
    if (total > 12) continue;
    sq.A = range_points(0, total);
    Point next = 0;
    std::vector<Point> order = sq.A;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Point> lam_by(total), f_by(total);
    for (auto s : sq.S) {
      for (auto t : sq.lambdabar.preimage(sq.fbar.at(s)))
        for (std::size_t j = 0; j < m1; ++j) {
          auto a = order[next++];
          lam_by[a] = s;
          f_by[a] = t;
        }
    }
    sq.lambda = FiniteMapping(sq.A, lam_by);
    sq.f = FiniteMapping(sq.A, f_by);
    return {sq, m1};
  }
}

struct C3Instance {
  GroupModel group;
  CommutativeSquare square;
  FiniteMapping u;
  int variant;
  std::size_t m1;
};

// Z/n with lambdabar(a) = d a, so Sbar = dZ/n and the kernel has d elements.
inline C3Instance random_c3(Rng& rng, int variant) {
  while (true) {
    const std::size_t n = uniform(rng, 1, 12);
    std::vector<std::size_t> divs;
    for (std::size_t d = 1; d <= n; ++d)
      if (n % d == 0) divs.push_back(d);
    const std::size_t d = divs[uniform(rng, 0, divs.size() - 1)];
    auto group = GroupModel::cyclic(n);
    CommutativeSquare sq;
    sq.A = sq.Abar = range_points(0, n);
    sq.lambdabar = FiniteMapping::tabulate(sq.A, [&](Point a) { return static_cast<Point>(d * a % n); });
    sq.Sbar = sq.lambdabar.image_set();
    auto coset = [&](Point target) { return sq.lambdabar.preimage(target); };
    const Point c = sq.Sbar[uniform(rng, 0, sq.Sbar.size() - 1)];

    if (variant == 1) {
      auto shuffled = sq.A;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const std::size_t ssize = uniform(rng, 1, std::min(n, sq.Sbar.size()));
      sq.S.assign(shuffled.begin(), shuffled.begin() + static_cast<long>(ssize));
      std::sort(sq.S.begin(), sq.S.end());
      auto targets = sq.Sbar;
      std::shuffle(targets.begin(), targets.end(), rng);
      sq.fbar = FiniteMapping(sq.S, {targets.begin(), targets.begin() + static_cast<long>(ssize)});
      sq.lambda = random_map(rng, sq.A, sq.S);
      sq.f = FiniteMapping::tabulate(sq.A, [&](Point a) {
        auto o = coset(sq.fbar.at(sq.lambda.at(a)));
        return o[uniform(rng, 0, o.size() - 1)];
      });
      auto v = FiniteMapping::tabulate(sq.S, [&](Point) {
        auto o = coset(c);
        return o[uniform(rng, 0, o.size() - 1)];
      });
      auto u = sq.lambda.then(v);
      return {group, sq, u, 1, 1};
    }

    std::vector<std::size_t> m1s;
    for (std::size_t m1 = 1; m1 <= n / d; ++m1)
      if ((n / d) % m1 == 0) m1s.push_back(m1);
    const std::size_t m1 = m1s[uniform(rng, 0, m1s.size() - 1)];
    const std::size_t ssize = n / (d * m1);
    auto shuffled = sq.A;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    sq.S.assign(shuffled.begin(), shuffled.begin() + static_cast<long>(ssize));
    std::sort(sq.S.begin(), sq.S.end());
    sq.fbar = random_map(rng, sq.S, sq.Sbar);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<Point> lam(n), fimg(n), fu(n);
    std::size_t next = 0;
    for (auto s : sq.S) {
      std::vector<Point> fiber(shuffled.begin() + static_cast<long>(next),
                               shuffled.begin() + static_cast<long>(next + m1 * d));
      next += m1 * d;
      auto t1 = coset(sq.fbar.at(s));
      auto t2 = coset(group.op(sq.fbar.at(s), c));
      auto g1 = fiber, g2 = fiber;
      std::shuffle(g2.begin(), g2.end(), rng);
      for (std::size_t i = 0; i < fiber.size(); ++i) {
        lam[g1[i]] = s;
        fimg[g1[i]] = t1[i / m1];
        fu[g2[i]] = t2[i / m1];
      }
    }
    sq.lambda = FiniteMapping(sq.A, lam);
    sq.f = FiniteMapping(sq.A, fimg);
    auto u = FiniteMapping::tabulate(sq.A, [&](Point a) { return group.op(group.inverse(fimg[a]), fu[a]); });
    return {group, sq, u, 2, m1};
  }
}

}  // namespace manyone::testing
