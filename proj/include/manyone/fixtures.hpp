#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "manyone/criteria.hpp"
#include "manyone/multiplicity.hpp"

namespace manyone {

using PointNamer = std::function<std::string(Point)>;

nlohmann::ordered_json report_to_json(const Mto1Report& rep, const PointNamer& name);

// String labels <-> dense point ids.
class Labels {
 public:
  Point intern(const std::string& s);
  Point lookup(const std::string& s) const;  // throws ParseError for unknown labels
  const std::string& name(Point p) const { return names_.at(p); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, Point> ids_;
};

// Commutative squares, group models and the checks to run on them; schema in docs/fixtures.md.
struct Fixture {
  Labels labels;
  CommutativeSquare square;
  std::optional<GroupModel> group;
  std::optional<FiniteMapping> u;
  std::optional<FiniteMapping> psi;
  nlohmann::json checks = nlohmann::json::array();
};

struct FixtureResult {
  std::string kind;
  std::size_t m = 0;
  bool lhs = false;
  bool rhs = false;
  std::string error;  // non-empty when a hypothesis failed
  bool agree() const { return error.empty() && lhs == rhs; }
};

Fixture load_fixture(const nlohmann::json& j);
std::vector<FixtureResult> run_fixture(const Fixture& fx);

// Writes a square (and optional group, u, checks) in the fixture format.
nlohmann::ordered_json fixture_to_json(const CommutativeSquare& sq, const PointNamer& name,
                                       const GroupModel* group = nullptr, const FiniteMapping* u = nullptr,
                                       const nlohmann::json& checks = nlohmann::json::array());

}  // namespace manyone
