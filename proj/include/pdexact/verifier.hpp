#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdexact/catalog.hpp"
#include "pdexact/eval.hpp"

namespace pdexact {

struct VerifyConfig {
  int grid_nt = 5;
  int grid_nx = 5;
  std::vector<std::uint64_t> seeds = {1, 2, 3};

  // normalized-residual tolerance per tier; an entry may override
  double tol_a = 1e-7;
  double tol_b = 1e-6;
  double tol_cd = 1e-5;
  std::optional<double> tol_flag;  // --tol: overrides everything

  double fd_tol = 1e-5;       // oracle agreement, relative
  double fd_h_frac = 1e-4;    // FD step as a fraction of the window span
  int fd_points = 5;          // FD probe points per seed during verification

  double max_fault_fraction = 0.20;  // window-faulted points beyond this fail
  double lipschitz_cap = 25.0;       // branch-jump cap, in units of grid step
  double per_point_budget_ms = 0.0;  // 0 = unlimited; exceeded -> note

  quad::QuadConfig quad;
  implicit::RootConfig root;

  std::map<std::string, double> param_overrides;
  std::optional<std::array<double, 4>> window_override;

  int jobs = 0;  // verify_all: 0 = all cores, 1 = serial reference path
};

enum class Status { Pass, Fail, QuarantinedPass, QuarantinedFail, Skipped };

const char* status_name(Status s);

struct SeedReport {
  std::uint64_t seed = 0;
  double max_rhat = 0.0;
  double worst_t = 0.0, worst_x = 0.0;
  std::vector<double> worst_terms;  // term magnitudes at the worst point
  double fd_max_rel = 0.0;
  double max_root_defect = 0.0;
  int grid_points = 0;
  int window_faults = 0;
  int branch_jumps = 0;
  int hard_faults = 0;
  int fd_faults = 0;
  std::string fault_note;
};

struct VerificationReport {
  std::string id;
  std::string source_label;
  char tier = 'A';
  bool quarantined = false;
  Status status = Status::Skipped;
  double tolerance = 0.0;
  std::vector<SeedReport> seeds;
  std::string note;  // triage payload for failures / skip reason
};

struct VerifySummary {
  int total = 0;
  int passed = 0;
  int failed = 0;
  int quarantined_passed = 0;
  int quarantined_failed = 0;
  int skipped = 0;
};

/// Independent derivative oracle: Richardson-extrapolated central
/// differences of a value-only evaluation. 13 stencil points: center, +-h
/// and +-h/2 on each axis, and the 4-point cross at +-h.
Jet2 fd_partials(const std::function<double(double, double)>& f, double t, double x, double ht,
                 double hx);

/// Effective residual tolerance for an entry under a config.
double entry_tolerance(const CatalogEntry& e, const VerifyConfig& cfg);

VerificationReport verify_entry(const CatalogEntry& e, const VerifyConfig& cfg);

struct VerifyAllResult {
  std::vector<VerificationReport> reports;
  VerifySummary summary;
};

/// Runs every entry. jobs == 1 uses the serial reference loop; anything else
/// runs entries in parallel with OpenMP (identical output either way).
VerifyAllResult verify_all(const Catalog& c, const VerifyConfig& cfg);

VerifySummary summarize(const std::vector<VerificationReport>& reports);

/// Deterministic serializations (no timestamps, fixed key order).
std::string reports_to_json(const VerifyAllResult& r, const VerifyConfig& cfg);
std::string reports_to_csv(const VerifyAllResult& r);

/// One stable machine-parsable line per entry:
/// "<id> <STATUS> max_rhat=<v> tol=<v> fd=<v> faults=<n>"
std::string summary_line(const VerificationReport& r);

}  // namespace pdexact
