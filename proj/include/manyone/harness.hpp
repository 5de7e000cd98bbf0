#pragma once

// Drivers behind the command-line tool: analyze, verify, search, count. Report schema in docs/report.md.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "manyone/cyclotomic.hpp"

namespace manyone {

// A search or enumeration larger than the configured budget.
class BudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// "5", "2..8", "5,7,11", "2..4,8"; ascending and deduplicated.
std::vector<std::uint64_t> parse_int_list(std::string_view text);
// "q=5,7;n=2..8;draws=50" -> {q: "5,7", n: "2..8", draws: "50"}
std::map<std::string, std::string> parse_grid(std::string_view text);

struct AnalyzeRequest {
  std::string field;  // "p^n" or "p^n/c0,...,cn"
  std::string poly;   // coefficients low-to-high
  std::optional<std::size_t> m;
  bool star = false;  // restrict to F_q^*
};
// Histogram, admissible m and one report per admissible m (or just the requested m).
nlohmann::ordered_json analyze(const AnalyzeRequest& req);
std::string analyze_text(const nlohmann::ordered_json& result);

struct VerifyJob {
  std::string family;
  std::map<std::string, std::string> grid;  // family-specific keys, see verify_families()
  bool all_m = false;                       // drop the m <= 16 cap where one applies
  std::uint64_t seed = 1;
  unsigned jobs = 0;  // 0: one worker per processor
};

struct Record {
  std::size_t seq = 0;  // generation order, the primary sort key
  std::string instance;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::size_t m = 0;
  std::string status = "checked";  // or "skipped: hypothesis"
  nlohmann::ordered_json predicted, observed;
  std::string reason;  // the case that held or the conjunct that failed
  std::vector<std::string> exceptional_set;
  double elapsed = 0;
  bool checked() const { return status == "checked"; }
  bool agree() const { return !checked() || predicted == observed; }
};

struct Report {
  std::string family;
  nlohmann::ordered_json job = nlohmann::ordered_json::object();
  std::vector<Record> records;  // sorted by (seq, m)
  double elapsed = 0;
  std::size_t total() const { return records.size(); }
  std::size_t skipped() const;
  std::size_t disagreements() const;
  std::size_t agreements() const { return total() - skipped() - disagreements(); }
};

// Family names with their grid keys and defaults, for --help.
std::vector<std::pair<std::string, std::string>> verify_families();
// ParseError for unknown families or grid keys, ScaleError beyond the scan limits.
Report run_verify(const VerifyJob& job);
nlohmann::ordered_json report_json(const Report& rep);
std::string report_csv(const Report& rep);
// Recursively drops every "elapsed" member, for byte comparison of re-runs.
nlohmann::ordered_json strip_elapsed(nlohmann::ordered_json j);

struct SearchRequest {
  std::string field;
  std::uint64_t s = 1;
  std::vector<std::uint64_t> r;  // empty: 1..2s
  int degree = 1;                // h monic of degree <= this
  std::size_t m = 1;
  std::uint64_t budget = std::uint64_t{1} << 27;  // candidate (h, r) pairs
  std::size_t limit = 0;                          // hits kept in the output, 0 = all
};

struct SearchHit {
  std::uint64_t r = 1;
  Poly h;
  Prediction prediction;
  bool verified = false;  // brute-force verdict on F_q^*
};

struct SearchResult {
  std::uint64_t candidates = 0;  // (h, r) pairs examined
  std::uint64_t rootless = 0;
  std::uint64_t total_hits = 0;
  std::vector<SearchHit> hits;  // sorted by r, then degree, then coefficients from the top
};

// BudgetError before any work when the space exceeds the budget.
SearchResult run_search(const SearchRequest& req);
nlohmann::ordered_json search_json(const SearchRequest& req, const SearchResult& res);

// count_formula for each (q, m), with exhaustive enumeration when q^q <= enumerate_budget.
nlohmann::ordered_json count_table(const std::vector<std::uint64_t>& qs, const std::vector<std::uint64_t>& ms,
                                   bool enumerate, std::uint64_t enumerate_budget = 1'000'000);

// Number of q^q self-maps of {0..q-1} that are m-to-1, by direct enumeration.
BigInt count_by_enumeration(std::uint64_t q, std::uint64_t m);

}  // namespace manyone
