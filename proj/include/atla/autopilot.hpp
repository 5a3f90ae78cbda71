#pragma once

namespace atla {

// Fixed-gain three-loop autopilot. Defaults are the nominal tuning.
struct TlaGains {
  double K_q = 0.464;
  double K_theta = 15.62474;
  double K_a = 0.2446459;
  double K_az = 0.9278;
};

struct TlaState {
  double integrator = 0.0;
};

// Which gains a degradation factor applies to.
struct GainMask {
  bool K_q = true;
  bool K_theta = true;
  bool K_a = true;
  bool K_az = true;
};

// Quantity under the autopilot integral.
double tla_integrand(const TlaGains& g, double q, double a_z, double a_z_ref);

// Fin command: K_q q plus the accumulated integral.
double tla_output(const TlaGains& g, const TlaState& s, double q);

TlaGains scale_gains(const TlaGains& g, double alpha_tla,
                     const GainMask& mask = {});

}  // namespace atla
