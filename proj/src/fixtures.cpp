#include "manyone/fixtures.hpp"

#include <stdexcept>

namespace manyone {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json report_to_json(const Mto1Report& rep, const PointNamer& name) {
  ordered_json j;
  j["m"] = rep.m;
  j["verdict"] = rep.verdict;
  j["k"] = rep.k;
  j["r"] = rep.r;
  auto e = ordered_json::array();
  for (auto p : rep.exceptional_set) e.push_back(name(p));
  j["exceptional_set"] = e;
  j["histogram"] = rep.histogram;
  return j;
}

Point Labels::intern(const std::string& s) {
  auto [it, fresh] = ids_.emplace(s, static_cast<Point>(names_.size()));
  if (fresh) names_.push_back(s);
  return it->second;
}

Point Labels::lookup(const std::string& s) const {
  auto it = ids_.find(s);
  if (it == ids_.end()) throw ParseError("unknown point label '" + s + "'");
  return it->second;
}

namespace {

std::vector<Point> read_set(const json& j, const char* key, Labels& labels) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ParseError(std::string("missing point set '") + key + "'");
  std::vector<Point> out;
  for (const auto& s : j.at(key)) out.push_back(labels.intern(s.get<std::string>()));
  return out;
}

FiniteMapping read_map(const json& j, const char* key, const std::vector<Point>& domain, Labels& labels) {
  if (!j.contains(key) || !j.at(key).is_object()) throw ParseError(std::string("missing map '") + key + "'");
  const auto& m = j.at(key);
  std::vector<Point> img;
  for (auto a : domain) {
    const auto& nm = labels.name(a);
    if (!m.contains(nm)) throw ParseError(std::string("map '") + key + "' is not defined at '" + nm + "'");
    img.push_back(labels.intern(m.at(nm).get<std::string>()));
  }
  if (m.size() != domain.size()) throw ParseError(std::string("map '") + key + "' has points outside its domain");
  return FiniteMapping(domain, std::move(img));
}

}  // namespace

Fixture load_fixture(const json& j) {
  Fixture fx;
  try {
    const auto& sets = j.at("sets");
    const auto& maps = j.at("maps");
    auto& sq = fx.square;
    sq.A = read_set(sets, "A", fx.labels);
    sq.Abar = read_set(sets, "Abar", fx.labels);
    sq.S = read_set(sets, "S", fx.labels);
    sq.Sbar = read_set(sets, "Sbar", fx.labels);
    sq.f = read_map(maps, "f", sq.A, fx.labels);
    sq.fbar = read_map(maps, "fbar", sq.S, fx.labels);
    sq.lambda = read_map(maps, "lambda", sq.A, fx.labels);
    sq.lambdabar = read_map(maps, "lambdabar", sq.Abar, fx.labels);
    if (maps.contains("u")) fx.u = read_map(maps, "u", sq.A, fx.labels);
    if (maps.contains("psi")) fx.psi = read_map(maps, "psi", sq.Abar, fx.labels);
    if (j.contains("group")) {
      const auto& g = j.at("group");
      auto el = read_set(g, "elements", fx.labels);
      std::vector<std::vector<Point>> table;
      for (auto a : el) {
        const auto& row = g.at("op").at(fx.labels.name(a));
        std::vector<Point> r;
        for (auto b : el) r.push_back(fx.labels.lookup(row.at(fx.labels.name(b)).get<std::string>()));
        table.push_back(std::move(r));
      }
      fx.group.emplace(std::move(el), std::move(table), g.value("trusted", false));
    }
    if (j.contains("checks")) fx.checks = j.at("checks");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed fixture: ") + e.what());
  }
  return fx;
}

std::vector<FixtureResult> run_fixture(const Fixture& fx) {
  std::vector<FixtureResult> out;
  for (const auto& c : fx.checks) {
    FixtureResult r;
    r.kind = c.at("kind").get<std::string>();
    r.m = c.at("m").get<std::size_t>();
    try {
      CriterionReport rep;
      if (r.kind == "local") {
        if (!fx.psi) throw ParseError("local check needs a 'psi' map");
        rep = local_criterion_check(fx.square.f, *fx.psi, r.m);
      } else if (r.kind == "construction1") {
        rep = construction1_verdict(fx.square, r.m);
      } else if (r.kind == "construction2") {
        rep = construction2_verdict(fx.square, c.at("m1").get<std::size_t>(), r.m);
      } else if (r.kind == "construction3") {
        if (!fx.group || !fx.u) throw ParseError("construction3 needs 'group' and map 'u'");
        rep = construction3_verdict(*fx.group, fx.square, *fx.u, c.at("variant").get<int>(), r.m,
                                    c.value("m1", std::size_t{1}));
      } else {
        throw ParseError("unknown check kind '" + r.kind + "'");
      }
      r.lhs = rep.lhs;
      r.rhs = rep.rhs;
    } catch (const HypothesisError& e) {
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

ordered_json fixture_to_json(const CommutativeSquare& sq, const PointNamer& name, const GroupModel* group,
                             const FiniteMapping* u, const json& checks) {
  auto names = [&](const std::vector<Point>& v) {
    auto a = ordered_json::array();
    for (auto p : v) a.push_back(name(p));
    return a;
  };
  auto table = [&](const FiniteMapping& m) {
    ordered_json o = ordered_json::object();
    for (std::size_t i = 0; i < m.size(); ++i) o[name(m.domain()[i])] = name(m.images()[i]);
    return o;
  };
  ordered_json j;
  j["sets"]["A"] = names(sq.A);
  j["sets"]["Abar"] = names(sq.Abar);
  j["sets"]["S"] = names(sq.S);
  j["sets"]["Sbar"] = names(sq.Sbar);
  j["maps"]["f"] = table(sq.f);
  j["maps"]["fbar"] = table(sq.fbar);
  j["maps"]["lambda"] = table(sq.lambda);
  j["maps"]["lambdabar"] = table(sq.lambdabar);
  if (u) j["maps"]["u"] = table(*u);
  if (group) {
    j["group"]["elements"] = names(group->elements());
    ordered_json op = ordered_json::object();
    for (auto a : group->elements())
      for (auto b : group->elements()) op[name(a)][name(b)] = name(group->op(a, b));
    j["group"]["op"] = op;
    j["group"]["trusted"] = group->size() > 64;
  }
  j["checks"] = checks;
  return j;
}

}  // namespace manyone
