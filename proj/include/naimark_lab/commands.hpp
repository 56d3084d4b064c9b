// The naimark-lab command line: subcommands validate, check, naimark, region
// and examples. Every subcommand first builds a machine report (JSON, with a
// versioned "schema" field); the human format is rendered from that report.
//
// Exit codes: 0 success, 1 analysis-level failure (invalid measurement,
// disagreeing methods, failed example assertion), 2 input error.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "naimark_lab/dichotomic.hpp"
#include "naimark_lab/document.hpp"

namespace naimark_lab::cli {

enum ExitCode : int { kOk = 0, kAnalysisFailure = 1, kInputError = 2 };

struct Report {
  nlohmann::json body;
  int exit_code = kOk;
};

Report validate_report(const PovmDocument& doc, double tol = kDefaultTol);

struct CheckOptions {
  bool oracle = true;
  bool w_search = true;
  bool g_estimate = true;
  std::uint64_t seed = 0;
  double tol = 1e-6;  // certification tolerance for W-search and the g-estimate
  int budget = 5000;
  int restarts = 8;
};
Report check_report(const PovmDocument& doc, const CheckOptions& opts);

struct NaimarkResult {
  Report report;
  PovmDocument extension;  // projectors on sys_dim * anc_dim, ancilla data in metadata
};
/// Throws std::invalid_argument for an unknown or ambiguous observable.
NaimarkResult naimark_report(const PovmDocument& doc, const std::optional<std::string>& observable);

struct RegionCommandOptions {
  char axis1 = 'x';
  char axis2 = 'y';
  int grid = 11;
  RegionOptions scan;
};
inline constexpr const char* kRegionCsvHeader = "lambda1,lambda2,w_search,oracle,closed_form,residual,theta";
std::string region_csv(const std::vector<RegionRow>& rows);
/// Summary of a scan: row count and disagreements with the lambda1^2 + lambda2^2 <= 1
/// region outside a 0.02 band (only meaningful for orthogonal axes).
Report region_summary(const std::vector<RegionRow>& rows, const RegionCommandOptions& opts);

/// which: 1-4, or 0 for all.
Report examples_report(int which);

/// Human-readable rendering of any report produced above.
std::string render_human(const nlohmann::json& body);

/// Shortest decimal that reads back as the same double.
std::string format_double(double v);

/// Entry point used by the naimark-lab binary.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace naimark_lab::cli
