#ifndef TOEPLITZ_REPORT_HPP
#define TOEPLITZ_REPORT_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

namespace toeplitz {

using json = nlohmann::ordered_json;

enum class Status { pass, fail, skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "?";
}

/// Outcome of one verification check. Counterexamples are capped at
/// `max_counterexamples`; the total number found goes into statistics.
struct Report {
  std::string check_name;
  std::string anchor;
  Status status = Status::pass;
  json counterexamples = json::array();
  json statistics = json::object();
  json budget = json::object();
  std::optional<std::uint64_t> seed;
  std::optional<double> wall_time;

  std::size_t max_counterexamples = 16;
  std::uint64_t violations = 0;

  Report() = default;
  Report(std::string name, std::string anchor_text)
      : check_name(std::move(name)), anchor(std::move(anchor_text)) {}

  bool passed() const { return status == Status::pass; }

  void fail(json example) {
    status = Status::fail;
    ++violations;
    if (counterexamples.size() < max_counterexamples)
      counterexamples.push_back(std::move(example));
  }

  static Report skipped(std::string name, std::string anchor_text, std::string why) {
    Report r(std::move(name), std::move(anchor_text));
    r.status = Status::skipped;
    r.statistics["reason"] = std::move(why);
    return r;
  }

  json to_json() const {
    json j;
    j["check_name"] = check_name;
    j["paper_anchor"] = anchor;
    j["status"] = to_string(status);
    j["counterexamples"] = counterexamples;
    json stats = statistics;
    if (status == Status::fail) stats["violations"] = violations;
    j["statistics"] = stats;
    j["budget"] = budget;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["wall_time"] = wall_time ? json(*wall_time) : json(nullptr);
    return j;
  }
};

/// Thrown when a check or analysis would exceed its configured work budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace toeplitz

#endif  // TOEPLITZ_REPORT_HPP
