#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "sops/frontends.hpp"
#include "sops/problem.hpp"
#include "sops/schedule.hpp"

namespace sops {

/// Parse failure with the offending field path, e.g. "operators.A.x1".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Result of reading a problem file: the declared problem (raw, vi, or
/// min) plus the optional schedule/params sections.
struct ParsedProblem {
  std::string kind;  // "raw" | "vi" | "min"
  std::variant<ProblemSpec, VISpec, MinSpec> problem;
  ScheduleConfig schedule;
  std::optional<double> sigma;
  std::optional<double> lambda;
  double eps_scale = 1.0;

  // raw specs pass through; vi/min go through their embeddings
  ProblemSpec to_spec() const;
};

ParsedProblem parse_problem_text(const std::string& text);
ParsedProblem parse_problem_file(const std::string& path);

// file-format serialization of a raw spec (built operators keep their
// catalog descriptors, so embedded problems serialize too)
std::string serialize_problem(const ProblemSpec& spec);

// structural comparison used by the round-trip contract
bool structurally_equal(const ProblemSpec& a, const ProblemSpec& b);

}  // namespace sops
