#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace manyone {

using Point = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

// Explicit function table: images()[i] is the image of domain()[i].
class FiniteMapping {
 public:
  FiniteMapping() = default;
  FiniteMapping(std::vector<Point> domain, std::vector<Point> images);

  template <class Fn>
  static FiniteMapping tabulate(std::vector<Point> domain, Fn&& fn) {
    std::vector<Point> img;
    img.reserve(domain.size());
    for (auto x : domain) img.push_back(static_cast<Point>(fn(x)));
    return FiniteMapping(std::move(domain), std::move(img));
  }

  const std::vector<Point>& domain() const { return domain_; }
  const std::vector<Point>& images() const { return images_; }
  std::size_t size() const { return domain_.size(); }
  bool defined_at(Point x) const;
  Point at(Point x) const;  // throws when x is outside the domain

  FiniteMapping restrict_to(const std::vector<Point>& sub) const;
  // (outer ∘ this); outer must be defined on every image of this.
  FiniteMapping then(const FiniteMapping& outer) const;
  std::vector<Point> image_set() const;  // sorted, distinct
  std::vector<Point> preimage(Point y) const;
  bool injective() const;

 private:
  std::vector<Point> domain_, images_;
  std::vector<std::pair<Point, std::uint32_t>> index_;  // sorted (point, position)
};

struct Mto1Report {
  std::size_t m = 0;
  bool verdict = false;
  std::size_t k = 0;  // fibers of size exactly m
  std::size_t r = 0;  // #A mod m
  std::vector<Point> exceptional_set;  // domain order; empty unless verdict
  std::vector<std::size_t> histogram;  // ascending fiber sizes
};

// Fiber size of each domain point's image, in domain order.
std::vector<std::size_t> fiber_sizes(const FiniteMapping& f);
std::vector<std::size_t> fiber_histogram(const FiniteMapping& f);
Mto1Report check_m_to_1(const FiniteMapping& f, std::size_t m);
std::vector<std::size_t> admissible_m_set(const FiniteMapping& f);

// Number of m-to-1 self-maps of a q-set.
BigInt count_formula(std::uint64_t q, std::uint64_t m);

}  // namespace manyone
