#include "pdexact/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pdexact {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::QuarantinedPass: return "QUARANTINED-PASS";
    case Status::QuarantinedFail: return "QUARANTINED-FAIL";
    case Status::Skipped: return "SKIPPED";
  }
  return "?";
}

Jet2 fd_partials(const std::function<double(double, double)>& f, double t, double x, double ht,
                 double hx) {
  const double f00 = f(t, x);
  const double fp0 = f(t + ht, x), fm0 = f(t - ht, x);
  const double f0p = f(t, x + hx), f0m = f(t, x - hx);
  const double fph = f(t + 0.5 * ht, x), fmh = f(t - 0.5 * ht, x);
  const double f0ph = f(t, x + 0.5 * hx), f0mh = f(t, x - 0.5 * hx);
  const double fpp = f(t + ht, x + hx), fpm = f(t + ht, x - hx);
  const double fmp = f(t - ht, x + hx), fmm = f(t - ht, x - hx);

  auto rich = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };

  Jet2 r;
  r.v = f00;
  r.d_t = rich((fp0 - fm0) / (2.0 * ht), (fph - fmh) / ht);
  r.d_x = rich((f0p - f0m) / (2.0 * hx), (f0ph - f0mh) / hx);
  r.d_tt = rich((fp0 - 2.0 * f00 + fm0) / (ht * ht),
                (fph - 2.0 * f00 + fmh) / (0.25 * ht * ht));
  r.d_xx = rich((f0p - 2.0 * f00 + f0m) / (hx * hx),
                (f0ph - 2.0 * f00 + f0mh) / (0.25 * hx * hx));
  r.d_tx = (fpp - fpm - fmp + fmm) / (4.0 * ht * hx);
  return r;
}

double entry_tolerance(const CatalogEntry& e, const VerifyConfig& cfg) {
  if (cfg.tol_flag) return *cfg.tol_flag;
  if (e.tol_override) return *e.tol_override;
  switch (e.tier) {
    case 'A': return cfg.tol_a;
    case 'B': return cfg.tol_b;
    default: return cfg.tol_cd;
  }
}

namespace {

struct EffectiveSettings {
  std::map<std::string, double> params;
  std::array<double, 4> window;
  double tolerance;
};

EffectiveSettings effective_settings(const CatalogEntry& e, const VerifyConfig& cfg) {
  EffectiveSettings s;
  s.params = default_params(e);
  for (const auto& [k, v] : cfg.param_overrides) s.params[k] = v;
  s.window = cfg.window_override ? *cfg.window_override : e.window;
  s.tolerance = entry_tolerance(e, cfg);
  return s;
}

double rel_dev(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double fd_agreement(const Jet2& jet, const Jet2& fd) {
  double m = rel_dev(jet.v, fd.v);
  m = std::max(m, rel_dev(jet.d_t, fd.d_t));
  m = std::max(m, rel_dev(jet.d_x, fd.d_x));
  m = std::max(m, rel_dev(jet.d_tt, fd.d_tt));
  m = std::max(m, rel_dev(jet.d_tx, fd.d_tx));
  m = std::max(m, rel_dev(jet.d_xx, fd.d_xx));
  return m;
}

SeedReport run_seed(const CatalogEntry& e, const VerifyConfig& cfg, const EffectiveSettings& s,
                    std::uint64_t seed) {
  SeedReport rep;
  rep.seed = seed;

  std::map<std::string, funcspace::SmoothFn> slots;
  for (const auto& slot : e.slots)
    slots[slot.name] =
        funcspace::sample(slot.name, slot.constraint, funcspace::seed_mix(seed, e.id));

  const auto [t_lo, t_hi, x_lo, x_hi] = s.window;
  const int nt = cfg.grid_nt, nx = cfg.grid_nx;
  const double dt = (t_hi - t_lo) / (nt - 1);
  const double dx = (x_hi - x_lo) / (nx - 1);
  const double step = std::max(dt, dx);

  // Grid rows are independent: each row gets a fresh warm-start context and
  // walks left to right, so branch continuation is deterministic and
  // row-parallel execution cannot change results.
  for (int it = 0; it < nt; ++it) {
    WarmCache warm;
    for (int ix = 0; ix < nx; ++ix) {
      const double t = t_lo + dt * it;
      const double x = x_lo + dx * ix;
      EvalStats stats;
      EvalEnv env;
      env.t = t;
      env.x = x;
      env.params = &s.params;
      env.slots = &slots;
      env.quad = cfg.quad;
      env.root = cfg.root;
      env.warm = &warm;
      env.stats = &stats;
      env.branch_cap = cfg.lipschitz_cap * step;
      env.superposition = e.superposition;
      ++rep.grid_points;
      try {
        const Jet2 wjet = eval_expr(*e.solution, env);
        const ResidualValue rv = residual_eval(*e.residual, wjet, env);
        const double rhat = normalized_residual(rv);
        if (rhat > rep.max_rhat) {
          rep.max_rhat = rhat;
          rep.worst_t = t;
          rep.worst_x = x;
          rep.worst_terms = rv.term_magnitudes;
        }
        rep.max_root_defect = std::max(rep.max_root_defect, stats.max_root_defect);
      } catch (const EvalError& err) {
        if (err.kind == FaultKind::BranchJump) {
          ++rep.branch_jumps;
          warm.clear();  // restart continuation from the bracket
        } else if (err.is_window_fault()) {
          ++rep.window_faults;
        } else {
          ++rep.hard_faults;
          if (rep.fault_note.empty())
            rep.fault_note = std::string(fault_kind_name(err.kind)) + " at (t=" +
                             std::to_string(t) + ", x=" + std::to_string(x) + "): " + err.what();
        }
      }
    }
  }

  // Oracle probes: value-only re-evaluation differentiated by central
  // differences, compared against the jet path.
  const double ht = cfg.fd_h_frac * (t_hi - t_lo);
  const double hx = cfg.fd_h_frac * (x_hi - x_lo);
  for (int k = 0; k < cfg.fd_points; ++k) {
    // deterministic inset probes: center plus quarter points
    static const double frac[][2] = {{0.5, 0.5}, {0.25, 0.25}, {0.25, 0.75},
                                     {0.75, 0.25}, {0.75, 0.75}, {0.4, 0.6}, {0.6, 0.4}};
    const auto& fr = frac[k % 7];
    const double t = t_lo + fr[0] * (t_hi - t_lo);
    const double x = x_lo + fr[1] * (x_hi - x_lo);
    WarmCache warm;
    EvalEnv env;
    env.params = &s.params;
    env.slots = &slots;
    env.quad = cfg.quad;
    env.root = cfg.root;
    env.warm = &warm;
    env.superposition = e.superposition;
    try {
      env.t = t;
      env.x = x;
      const Jet2 jet = eval_expr(*e.solution, env);
      auto value_at = [&](double tt, double xx) {
        EvalEnv venv = env;
        venv.t = tt;
        venv.x = xx;
        return eval_value(*e.solution, venv);
      };
      const Jet2 fd = fd_partials(value_at, t, x, ht, hx);
      rep.fd_max_rel = std::max(rep.fd_max_rel, fd_agreement(jet, fd));
    } catch (const EvalError& err) {
      // soft FD-probe faults are tracked apart from grid faults so that the
      // 20% window-fault rule only sees grid points
      if (err.is_window_fault() || err.kind == FaultKind::BranchJump)
        ++rep.fd_faults;
      else {
        ++rep.hard_faults;
        if (rep.fault_note.empty())
          rep.fault_note = std::string(fault_kind_name(err.kind)) + " during FD probe: " +
                           err.what();
      }
    }
  }
  return rep;
}

std::string format_triage(const VerificationReport& r, const VerifyConfig& cfg) {
  // worst seed by residual
  const SeedReport* worst = nullptr;
  for (const auto& s : r.seeds)
    if (!worst || s.max_rhat > worst->max_rhat) worst = &s;
  if (!worst) return "";
  std::ostringstream os;
  os << "worst point (t=" << worst->worst_t << ", x=" << worst->worst_x
     << ") seed " << worst->seed << ", max normalized residual " << worst->max_rhat
     << " vs tolerance " << r.tolerance << "; term magnitudes [";
  for (std::size_t i = 0; i < worst->worst_terms.size(); ++i) {
    if (i) os << ", ";
    os << worst->worst_terms[i];
  }
  os << "]";
  if (worst->fd_max_rel > cfg.fd_tol)
    os << "; FD agreement " << worst->fd_max_rel << " above " << cfg.fd_tol;
  int faults = 0;
  for (const auto& s : r.seeds) faults += s.window_faults + s.branch_jumps + s.hard_faults;
  if (faults) os << "; " << faults << " faulted point(s)";
  for (const auto& s : r.seeds)
    if (!s.fault_note.empty()) {
      os << "; " << s.fault_note;
      break;
    }
  return os.str();
}

}  // namespace

VerificationReport verify_entry(const CatalogEntry& e, const VerifyConfig& cfg) {
  VerificationReport rep;
  rep.id = e.id;
  rep.source_label = e.source_label;
  rep.tier = e.tier;
  rep.quarantined = e.quarantined;

  const EffectiveSettings s = effective_settings(e, cfg);
  rep.tolerance = s.tolerance;

  if (auto bad = violated_constraint(e, s.params)) {
    rep.status = Status::Skipped;
    rep.note = "ConstraintViolation: parameters violate '" + *bad + "'";
    return rep;
  }

  bool pass = true;
  for (std::uint64_t seed : cfg.seeds) {
    SeedReport sr;
    try {
      sr = run_seed(e, cfg, s, seed);
    } catch (const EvalError& err) {  // sampling exhausted and the like
      sr.seed = seed;
      sr.hard_faults = 1;
      sr.fault_note = std::string(fault_kind_name(err.kind)) + ": " + err.what();
    }
    const int total = std::max(1, sr.grid_points);
    const double faulted =
        static_cast<double>(sr.window_faults + sr.branch_jumps) / total;
    if (sr.max_rhat > s.tolerance || sr.fd_max_rel > cfg.fd_tol || sr.hard_faults > 0 ||
        faulted > cfg.max_fault_fraction)
      pass = false;
    rep.seeds.push_back(std::move(sr));
  }

  rep.status = pass ? (e.quarantined ? Status::QuarantinedPass : Status::Pass)
                    : (e.quarantined ? Status::QuarantinedFail : Status::Fail);
  if (!pass) {
    rep.note = format_triage(rep, cfg);
    if (!e.note.empty()) {
      if (!rep.note.empty()) rep.note += "; ";
      rep.note += "catalogue note: " + e.note;
    }
  } else if (e.quarantined && !e.note.empty()) {
    rep.note = "catalogue note: " + e.note;
  }
  return rep;
}

VerifySummary summarize(const std::vector<VerificationReport>& reports) {
  VerifySummary s;
  s.total = static_cast<int>(reports.size());
  for (const auto& r : reports) {
    switch (r.status) {
      case Status::Pass: ++s.passed; break;
      case Status::Fail: ++s.failed; break;
      case Status::QuarantinedPass: ++s.quarantined_passed; break;
      case Status::QuarantinedFail: ++s.quarantined_failed; break;
      case Status::Skipped: ++s.skipped; break;
    }
  }
  return s;
}

VerifyAllResult verify_all(const Catalog& c, const VerifyConfig& cfg) {
  VerifyAllResult out;
  out.reports.resize(c.entries.size());
  const int n = static_cast<int>(c.entries.size());

  if (cfg.jobs == 1) {
    // serial reference path, kept verbatim for determinism tests
    for (int i = 0; i < n; ++i)
      out.reports[static_cast<std::size_t>(i)] =
          verify_entry(c.entries[static_cast<std::size_t>(i)], cfg);
  } else {
#ifdef _OPENMP
    if (cfg.jobs > 1) omp_set_num_threads(cfg.jobs);
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < n; ++i)
      out.reports[static_cast<std::size_t>(i)] =
          verify_entry(c.entries[static_cast<std::size_t>(i)], cfg);
  }
  out.summary = summarize(out.reports);
  return out;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json seed_to_json(const SeedReport& s) {
  ordered_json j;
  j["seed"] = s.seed;
  j["max_rhat"] = s.max_rhat;
  j["worst_point"] = {s.worst_t, s.worst_x};
  j["worst_terms"] = s.worst_terms;
  j["fd_max_rel"] = s.fd_max_rel;
  j["max_root_defect"] = s.max_root_defect;
  j["grid_points"] = s.grid_points;
  j["window_faults"] = s.window_faults;
  j["branch_jumps"] = s.branch_jumps;
  j["hard_faults"] = s.hard_faults;
  j["fd_faults"] = s.fd_faults;
  if (!s.fault_note.empty()) j["fault_note"] = s.fault_note;
  return j;
}

}  // namespace

std::string reports_to_json(const VerifyAllResult& r, const VerifyConfig& cfg) {
  ordered_json doc;
  doc["reports"] = ordered_json::array();
  for (const auto& rep : r.reports) {
    ordered_json j;
    j["id"] = rep.id;
    j["source_label"] = rep.source_label;
    j["tier"] = std::string(1, rep.tier);
    j["quarantined"] = rep.quarantined;
    j["status"] = status_name(rep.status);
    j["tolerance"] = rep.tolerance;
    j["seeds"] = ordered_json::array();
    for (const auto& s : rep.seeds) j["seeds"].push_back(seed_to_json(s));
    if (!rep.note.empty()) j["note"] = rep.note;
    doc["reports"].push_back(std::move(j));
  }
  ordered_json sum;
  sum["total"] = r.summary.total;
  sum["passed"] = r.summary.passed;
  sum["failed"] = r.summary.failed;
  sum["quarantined_passed"] = r.summary.quarantined_passed;
  sum["quarantined_failed"] = r.summary.quarantined_failed;
  sum["skipped"] = r.summary.skipped;
  doc["summary"] = std::move(sum);
  ordered_json eff;
  eff["grid"] = {cfg.grid_nt, cfg.grid_nx};
  eff["seeds"] = cfg.seeds;
  eff["fd_tol"] = cfg.fd_tol;
  doc["settings"] = std::move(eff);
  return doc.dump(2) + "\n";
}

std::string reports_to_csv(const VerifyAllResult& r) {
  std::ostringstream os;
  os << "id,tier,status,max_rhat,faults\n";
  for (const auto& rep : r.reports) {
    double max_rhat = 0.0;
    int faults = 0;
    for (const auto& s : rep.seeds) {
      max_rhat = std::max(max_rhat, s.max_rhat);
      faults += s.window_faults + s.branch_jumps + s.hard_faults;
    }
    os << rep.id << ',' << rep.tier << ',' << status_name(rep.status) << ',' << max_rhat << ','
       << faults << '\n';
  }
  return os.str();
}

std::string summary_line(const VerificationReport& r) {
  double max_rhat = 0.0, fd = 0.0;
  int faults = 0;
  for (const auto& s : r.seeds) {
    max_rhat = std::max(max_rhat, s.max_rhat);
    fd = std::max(fd, s.fd_max_rel);
    faults += s.window_faults + s.branch_jumps + s.hard_faults;
  }
  std::ostringstream os;
  os << r.id << ' ' << status_name(r.status) << " max_rhat=" << max_rhat
     << " tol=" << r.tolerance << " fd=" << fd << " faults=" << faults;
  return os.str();
}

}  // namespace pdexact
