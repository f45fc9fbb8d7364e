// Compares the serial reference verification loop against the OpenMP path
// over the shipped catalogue and checks that both produce identical reports.
#include <chrono>
#include <cstdio>

#include "pdexact/verifier.hpp"

using namespace pdexact;

namespace {

double time_run(const Catalog& cat, VerifyConfig cfg, int jobs, VerifyAllResult& out) {
  cfg.jobs = jobs;
  const auto start = std::chrono::steady_clock::now();
  out = verify_all(cat, cfg);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const Catalog& cat = default_catalog();
  VerifyConfig cfg;
  if (argc > 1) cfg.grid_nt = cfg.grid_nx = std::atoi(argv[1]);

  VerifyAllResult serial, parallel;
  const double t_serial = time_run(cat, cfg, 1, serial);
  const double t_parallel = time_run(cat, cfg, 0, parallel);

  const std::string a = reports_to_json(serial, cfg);
  const std::string b = reports_to_json(parallel, cfg);
  std::printf("entries:  %d\n", serial.summary.total);
  std::printf("serial:   %.3f s\n", t_serial);
  std::printf("parallel: %.3f s  (speedup %.2fx)\n", t_parallel,
              t_parallel > 0 ? t_serial / t_parallel : 0.0);
  std::printf("reports identical: %s\n", a == b ? "yes" : "NO");
  return a == b ? 0 : 1;
}
