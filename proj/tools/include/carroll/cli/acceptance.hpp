#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "carroll/params.hpp"

namespace carroll::cli {

struct Criterion {
  std::string id;
  bool pass = false;
  double value = 0.0;      // headline measured error
  double tolerance = 0.0;  // bound it is compared against
  std::string detail;      // deterministic sub-measurements
  double seconds = 0.0;    // wall time, kept out of report files
};

struct AcceptanceOptions {
  PhysParams params;
  std::uint64_t seed = 1;
  // Test-only negative control forwarded to the physical DNLS route.
  double quintic_scale = 1.0;
  bool determinism = true;
};

Criterion check_kernel_propagator(const AcceptanceOptions& o);
Criterion check_closed_form(const AcceptanceOptions& o);
Criterion check_coulomb(const AcceptanceOptions& o);
Criterion check_oscillator(const AcceptanceOptions& o);
Criterion check_quartic(const AcceptanceOptions& o);
Criterion check_schwarzian(const AcceptanceOptions& o);
Criterion check_exchange(const AcceptanceOptions& o);
Criterion check_dnls(const AcceptanceOptions& o);
Criterion check_gauge(const AcceptanceOptions& o);
Criterion check_determinism(const AcceptanceOptions& o);

// Runs every criterion in order, reporting each as soon as it finishes.
std::vector<Criterion> run_acceptance(const AcceptanceOptions& o,
                                      const std::function<void(const Criterion&)>& report = {});

// "PASS id value=... tol=... detail"
std::string report_line(const Criterion& c);

}  // namespace carroll::cli
