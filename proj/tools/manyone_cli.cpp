// manyone: analyze, verify, search, count.
// Exit codes: 0 ok, 1 disagreement, 2 bad input, 3 unsupported scale, 4 budget exceeded, 5 internal error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "manyone/harness.hpp"

namespace {

using namespace manyone;
using nlohmann::ordered_json;

constexpr int kDisagree = 1, kParse = 2, kScale = 3, kBudget = 4, kInternal = 5;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

void emit(const ordered_json& j, bool json, const std::string& out_path, const std::string& text) {
  const auto dumped = j.dump(2) + "\n";
  if (!out_path.empty()) write_file(out_path, dumped);
  std::cout << (json ? dumped : text);
}

std::string verify_text(const Report& rep) {
  std::ostringstream os;
  os << "family " << rep.family << ": " << rep.total() << " records, " << rep.total() - rep.skipped()
     << " checked, " << rep.skipped() << " skipped, " << rep.disagreements() << " disagreements\n";
  std::size_t shown = 0;
  for (const auto& r : rep.records) {
    if (r.agree()) continue;
    if (++shown > 20) break;
    os << "  DISAGREE " << r.instance << ' ' << r.parameters.dump() << " m=" << r.m
       << " predicted=" << r.predicted.dump() << " observed=" << r.observed.dump() << " (" << r.reason << ")\n";
  }
  return os.str();
}

std::string search_text(const SearchResult& res) {
  std::ostringstream os;
  os << res.candidates << " candidates, " << res.rootless << " rootless h, " << res.total_hits << " hits\n";
  for (const auto& h : res.hits)
    os << "  r=" << h.r << " h=" << h.h.to_string() << (h.verified ? "" : "  UNVERIFIED") << '\n';
  return os.str();
}

std::string count_text(const ordered_json& j) {
  std::ostringstream os;
  for (const auto& row : j["counts"]) {
    os << "q=" << row["q"].get<std::uint64_t>() << " m=" << row["m"].get<std::uint64_t>()
       << " formula=" << row["formula"].get<std::string>();
    if (row.contains("enumerated"))
      os << " enumerated=" << row["enumerated"].get<std::string>() << (row["agree"].get<bool>() ? "" : "  MISMATCH");
    os << '\n';
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Many-to-one maps over finite fields: analysis, theorem verification, search and counting"};
  app.require_subcommand(1);

  AnalyzeRequest areq;
  std::size_t analyze_m = 0;
  bool json = false;
  std::string out_path, csv_path;

  auto* analyze = app.add_subcommand("analyze", "Fiber histogram, admissible m and exceptional sets of a polynomial");
  analyze->add_option("field,--field", areq.field, "p^n or p^n/c0,...,cn")->required();
  analyze->add_option("poly,--poly", areq.poly, "coefficients low-to-high, integers or g^k")->required();
  analyze->add_option("--m", analyze_m, "report only this m");
  analyze->add_flag("--star", areq.star, "restrict to F_q^*");
  analyze->add_flag("--json", json, "print JSON");
  analyze->add_option("--out", out_path, "also write the JSON result here");

  VerifyJob job;
  std::string grid_text, q_text, n_text, m_text;
  bool list_families = false;
  auto* verify = app.add_subcommand("verify", "Compare a theorem family with brute force over a grid");
  verify->add_option("family,--family", job.family, "family name, see --list");
  verify->add_option("--grid", grid_text, "key=value pairs separated by ';'");
  verify->add_option("--q", q_text, "shorthand for grid key q");
  verify->add_option("--n", n_text, "shorthand for grid key n");
  verify->add_option("--m", m_text, "keep only these m");
  verify->add_flag("--all", job.all_m, "every m in range, no cap");
  verify->add_option("--seed", job.seed, "random seed");
  verify->add_option("--jobs", job.jobs, "worker threads, 0 = one per processor");
  verify->add_option("--out", out_path, "write the JSON report here");
  verify->add_option("--csv", csv_path, "write a CSV export here");
  verify->add_flag("--json", json, "print the JSON report");
  verify->add_flag("--list", list_families, "list families and their grid keys");

  SearchRequest sreq;
  std::string r_text;
  auto* search = app.add_subcommand("search", "Enumerate monic h for x^r h(x^s) and keep the m-to-1 ones");
  search->add_option("field,--field", sreq.field, "p^n or p^n/c0,...,cn")->required();
  search->add_option("--s", sreq.s, "s, a divisor of q-1")->required();
  search->add_option("--r", r_text, "exponents r, default 1..2s");
  search->add_option("--deg", sreq.degree, "degree bound for h")->required();
  search->add_option("--m", sreq.m, "target m")->required();
  search->add_option("--budget", sreq.budget, "maximum (h, r) candidates");
  search->add_option("--limit", sreq.limit, "hits to print, 0 = all");
  search->add_flag("--json", json, "print JSON");
  search->add_option("--out", out_path, "also write the JSON result here");

  std::string cq_text = "2..5", cm_text;
  bool enumerate = false;
  std::uint64_t count_budget = 1'000'000;
  auto* count = app.add_subcommand("count", "Number of m-to-1 self-maps of a q-set");
  count->add_option("--q", cq_text, "set sizes");
  count->add_option("--m", cm_text, "multiplicities, default 1..q");
  count->add_flag("--enumerate", enumerate, "also enumerate all q^q maps");
  count->add_option("--budget", count_budget, "maximum number of maps to enumerate");
  count->add_flag("--json", json, "print JSON");
  count->add_option("--out", out_path, "also write the JSON result here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*analyze) {
      if (analyze_m) areq.m = analyze_m;
      const auto result = manyone::analyze(areq);
      emit(result, json, out_path, analyze_text(result));
      return 0;
    }
    if (*verify) {
      if (list_families) {
        for (const auto& [name, keys] : verify_families()) std::cout << name << "  " << keys << '\n';
        return 0;
      }
      if (job.family.empty()) throw ParseError("verify needs a family, see --list");
      job.grid = parse_grid(grid_text);
      if (!q_text.empty()) job.grid["q"] = q_text;
      if (!n_text.empty()) job.grid["n"] = n_text;
      if (!m_text.empty()) job.grid["m"] = m_text;
      const auto rep = run_verify(job);
      const auto j = report_json(rep);
      if (!csv_path.empty()) write_file(csv_path, report_csv(rep));
      emit(j, json, out_path, verify_text(rep));
      return rep.disagreements() ? kDisagree : 0;
    }
    if (*search) {
      if (!r_text.empty()) sreq.r = parse_int_list(r_text);
      const auto res = run_search(sreq);
      emit(search_json(sreq, res), json, out_path, search_text(res));
      for (const auto& h : res.hits)
        if (!h.verified) return kDisagree;
      return 0;
    }
    if (*count) {
      std::vector<std::uint64_t> ms;
      if (!cm_text.empty()) ms = parse_int_list(cm_text);
      const auto j = count_table(parse_int_list(cq_text), ms, enumerate, count_budget);
      emit(j, json, out_path, count_text(j));
      for (const auto& row : j["counts"])
        if (row.contains("agree") && !row["agree"].get<bool>()) return kDisagree;
      return 0;
    }
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const ScaleError& e) {
    std::cerr << "unsupported scale: " << e.what() << '\n';
    return kScale;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const HypothesisError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kParse;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
