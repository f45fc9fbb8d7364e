#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pdexact/verifier.hpp"

namespace {

using namespace pdexact;

struct CommonOpts {
  std::string catalog_path;
  std::vector<std::uint64_t> seeds;
  std::string grid;
  double tol = 0.0;
  std::vector<std::string> params;
  std::vector<double> window;
  std::string report_path;
  std::string csv_path;
  int jobs = 0;
};

Catalog load(const CommonOpts& o) {
  if (!o.catalog_path.empty()) return load_catalog_file(o.catalog_path);
  return default_catalog();
}

void apply_common(VerifyConfig& cfg, const CommonOpts& o) {
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (!o.grid.empty()) {
    const auto sep = o.grid.find('x');
    if (sep == std::string::npos)
      throw CLI::ValidationError("--grid", "expected NxM, e.g. 5x5");
    cfg.grid_nt = std::stoi(o.grid.substr(0, sep));
    cfg.grid_nx = std::stoi(o.grid.substr(sep + 1));
    if (cfg.grid_nt < 2 || cfg.grid_nx < 2)
      throw CLI::ValidationError("--grid", "grid must be at least 2x2");
  }
  if (o.tol > 0.0) cfg.tol_flag = o.tol;
  for (const auto& p : o.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param", "expected name=value");
    cfg.param_overrides[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
  }
  if (!o.window.empty()) {
    if (o.window.size() != 4)
      throw CLI::ValidationError("--window", "expected tlo,thi,xlo,xhi");
    cfg.window_override = {o.window[0], o.window[1], o.window[2], o.window[3]};
  }
  cfg.jobs = o.jobs;
}

void write_outputs(const VerifyAllResult& result, const VerifyConfig& cfg, const CommonOpts& o) {
  if (!o.report_path.empty()) {
    std::ofstream out(o.report_path, std::ios::binary);
    out << reports_to_json(result, cfg);
  }
  if (!o.csv_path.empty()) {
    std::ofstream out(o.csv_path, std::ios::binary);
    out << reports_to_csv(result);
  }
}

int exit_code(const VerifyAllResult& result) {
  for (const auto& r : result.reports)
    if (r.status == Status::Fail) return 1;
  return 0;
}

/// Overridden parameters must satisfy the entry's stated constraints before
/// any verification runs; a violating override is a usage error.
void check_overrides(const Catalog& cat, const VerifyConfig& cfg,
                     const std::string& only_id = {}) {
  if (cfg.param_overrides.empty()) return;
  for (const auto& e : cat.entries) {
    if (!only_id.empty() && e.id != only_id) continue;
    auto params = default_params(e);
    bool touches = false;
    for (const auto& [k, v] : cfg.param_overrides)
      if (params.count(k)) {
        params[k] = v;
        touches = true;
      }
    if (!touches) continue;
    if (auto bad = violated_constraint(e, params))
      throw CLI::ValidationError("--param", "ConstraintViolation for " + e.id +
                                                ": entry requires '" + *bad + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Catalogue and verification engine for exact general solutions "
               "of second-order nonlinear PDEs in two variables"};
  app.require_subcommand(1);

  CommonOpts o;
  auto add_common = [&o](CLI::App* cmd, bool with_outputs) {
    cmd->add_option("--catalog", o.catalog_path, "catalogue JSON file (default: embedded)");
    cmd->add_option("--seed", o.seeds, "verification seeds (comma separated)")->delimiter(',');
    cmd->add_option("--grid", o.grid, "grid as NxM (default 5x5)");
    cmd->add_option("--tol", o.tol, "residual tolerance override");
    cmd->add_option("--param", o.params, "parameter override name=value (repeatable)");
    cmd->add_option("--window", o.window, "window tlo,thi,xlo,xhi")->delimiter(',');
    cmd->add_option("--jobs", o.jobs, "worker threads (1 = serial)");
    if (with_outputs) {
      cmd->add_option("--report", o.report_path, "write JSON report");
      cmd->add_option("--csv", o.csv_path, "write CSV report");
    }
  };

  auto* list_cmd = app.add_subcommand("list", "list catalogue entries");
  list_cmd->add_option("--catalog", o.catalog_path, "catalogue JSON file");

  std::string show_id;
  auto* show_cmd = app.add_subcommand("show", "pretty-print one entry");
  show_cmd->add_option("id", show_id, "entry id, e.g. S2-03")->required();
  show_cmd->add_option("--catalog", o.catalog_path, "catalogue JSON file");

  std::string verify_id;
  auto* verify_cmd = app.add_subcommand("verify", "verify one entry");
  verify_cmd->add_option("id", verify_id, "entry id")->required();
  add_common(verify_cmd, true);

  auto* verify_all_cmd = app.add_subcommand("verify-all", "verify the whole catalogue");
  add_common(verify_all_cmd, true);

  std::string export_path;
  auto* export_cmd = app.add_subcommand("export-catalog", "write the embedded catalogue file");
  export_cmd->add_option("path", export_path, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*list_cmd) {
      const Catalog cat = load(o);
      std::printf("%-8s %-8s %-4s %s\n", "id", "source", "tier", "quarantined");
      for (const auto& e : cat.entries)
        std::printf("%-8s %-8s %-4c %s\n", e.id.c_str(), e.source_label.c_str(), e.tier,
                    e.quarantined ? "yes" : "no");
      return 0;
    }
    if (*show_cmd) {
      const Catalog cat = load(o);
      const CatalogEntry& e = get(cat, show_id);
      std::cout << "id:       " << e.id << "\nsource:   " << e.source_label
                << "\ntier:     " << e.tier << (e.quarantined ? "  (quarantined)" : "") << "\n";
      if (!e.note.empty()) std::cout << "note:     " << e.note << "\n";
      std::cout << "residual: " << print(e.residual) << "\nsolution: " << print(e.solution)
                << "\nwindow:   t in [" << e.window[0] << ", " << e.window[1] << "], x in ["
                << e.window[2] << ", " << e.window[3] << "]\n";
      for (const auto& p : e.params) {
        std::cout << "param:    " << p.name << " = " << p.value;
        if (!p.constraint.empty()) std::cout << "   (" << p.constraint << ")";
        std::cout << "\n";
      }
      for (const auto& s : e.slots) std::cout << "slot:     " << s.name << "\n";
      return 0;
    }
    if (*export_cmd) {
      std::ofstream out(export_path, std::ios::binary);
      if (!out) {
        std::cerr << "cannot write " << export_path << "\n";
        return 2;
      }
      out << default_catalog_text();
      return 0;
    }

    VerifyConfig cfg;
    apply_common(cfg, o);
    const Catalog cat = load(o);

    if (*verify_cmd) {
      check_overrides(cat, cfg, verify_id);
      const CatalogEntry& e = get(cat, verify_id);
      VerifyAllResult result;
      result.reports.push_back(verify_entry(e, cfg));
      result.summary = summarize(result.reports);
      std::cout << summary_line(result.reports[0]) << "\n";
      if (!result.reports[0].note.empty())
        std::cout << "  note: " << result.reports[0].note << "\n";
      write_outputs(result, cfg, o);
      return exit_code(result);
    }

    // verify-all
    check_overrides(cat, cfg);
    const VerifyAllResult result = verify_all(cat, cfg);
    for (const auto& r : result.reports) std::cout << summary_line(r) << "\n";
    const auto& s = result.summary;
    std::cout << "summary: total=" << s.total << " pass=" << s.passed << " fail=" << s.failed
              << " quarantined-pass=" << s.quarantined_passed
              << " quarantined-fail=" << s.quarantined_failed << " skipped=" << s.skipped
              << "\n";
    write_outputs(result, cfg, o);
    return exit_code(result);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const NotFoundError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
