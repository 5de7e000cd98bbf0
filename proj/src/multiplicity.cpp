#include "manyone/multiplicity.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace manyone {

FiniteMapping::FiniteMapping(std::vector<Point> domain, std::vector<Point> images)
    : domain_(std::move(domain)), images_(std::move(images)) {
  if (domain_.empty()) throw std::invalid_argument("mapping domain is empty");
  if (domain_.size() != images_.size()) throw std::invalid_argument("mapping table has the wrong length");
  index_.reserve(domain_.size());
  for (std::uint32_t i = 0; i < domain_.size(); ++i) index_.emplace_back(domain_[i], i);
  std::sort(index_.begin(), index_.end());
  for (std::size_t i = 1; i < index_.size(); ++i)
    if (index_[i].first == index_[i - 1].first) throw std::invalid_argument("duplicate domain point");
}

bool FiniteMapping::defined_at(Point x) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), std::pair<Point, std::uint32_t>{x, 0});
  return it != index_.end() && it->first == x;
}

Point FiniteMapping::at(Point x) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), std::pair<Point, std::uint32_t>{x, 0});
  if (it == index_.end() || it->first != x)
    throw std::out_of_range("point " + std::to_string(x) + " outside the mapping domain");
  return images_[it->second];
}

FiniteMapping FiniteMapping::restrict_to(const std::vector<Point>& sub) const {
  std::vector<Point> img;
  img.reserve(sub.size());
  for (auto x : sub) img.push_back(at(x));
  return FiniteMapping(sub, std::move(img));
}

FiniteMapping FiniteMapping::then(const FiniteMapping& outer) const {
  std::vector<Point> img;
  img.reserve(images_.size());
  for (auto y : images_) img.push_back(outer.at(y));
  return FiniteMapping(domain_, std::move(img));
}

std::vector<Point> FiniteMapping::image_set() const {
  std::vector<Point> s(images_);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::vector<Point> FiniteMapping::preimage(Point y) const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (images_[i] == y) out.push_back(domain_[i]);
  return out;
}

bool FiniteMapping::injective() const { return image_set().size() == domain_.size(); }

std::vector<std::size_t> fiber_sizes(const FiniteMapping& f) {
  const auto& img = f.images();
  std::vector<std::size_t> out(img.size());
  const Point hi = *std::max_element(img.begin(), img.end());
  if (hi < (1u << 20)) {
    std::vector<std::uint32_t> count(static_cast<std::size_t>(hi) + 1, 0);
    for (auto y : img) ++count[y];
    for (std::size_t i = 0; i < img.size(); ++i) out[i] = count[img[i]];
    return out;
  }
  std::vector<Point> sorted(img);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < img.size(); ++i) {
    auto [lo, up] = std::equal_range(sorted.begin(), sorted.end(), img[i]);
    out[i] = static_cast<std::size_t>(up - lo);
  }
  return out;
}

std::vector<std::size_t> fiber_histogram(const FiniteMapping& f) {
  std::vector<Point> sorted(f.images());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> hist;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    hist.push_back(j - i);
    i = j;
  }
  std::sort(hist.begin(), hist.end());
  return hist;
}

Mto1Report check_m_to_1(const FiniteMapping& f, std::size_t m) {
  const auto n = f.size();
  if (m < 1 || m > n)
    throw std::out_of_range("m = " + std::to_string(m) + " outside 1.." + std::to_string(n));
  Mto1Report rep;
  rep.m = m;
  rep.r = n % m;
  rep.histogram = fiber_histogram(f);
  rep.k = static_cast<std::size_t>(std::count(rep.histogram.begin(), rep.histogram.end(), m));
  rep.verdict = rep.k * m == n - rep.r;
  if (rep.verdict && rep.r) {
    const auto sizes = fiber_sizes(f);
    for (std::size_t i = 0; i < n; ++i)
      if (sizes[i] != m) rep.exceptional_set.push_back(f.domain()[i]);
  }
  return rep;
}

std::vector<std::size_t> admissible_m_set(const FiniteMapping& f) {
  const auto hist = fiber_histogram(f);
  const auto n = f.size();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < hist.size();) {
    std::size_t j = i;
    while (j < hist.size() && hist[j] == hist[i]) ++j;
    const auto m = hist[i];
    if ((j - i) * m == n - n % m) out.push_back(m);
    i = j;
  }
  return out;
}

namespace {
BigInt factorial(std::uint64_t n) {
  BigInt r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r *= i;
  return r;
}
}  // namespace

BigInt count_formula(std::uint64_t q, std::uint64_t m) {
  if (q < 1 || m < 1 || m > q)
    throw std::out_of_range("count_formula needs 1 <= m <= q");
  const auto k = q / m, r = q % m;
  const BigInt qf = factorial(q);
  BigInt num = qf * qf * boost::multiprecision::pow(BigInt(q - k), static_cast<unsigned>(r));
  BigInt den = factorial(k) * factorial(r) * boost::multiprecision::pow(factorial(m), static_cast<unsigned>(k)) *
               factorial(q - k);
  return num / den;
}

}  // namespace manyone
