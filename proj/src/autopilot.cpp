#include "atla/autopilot.hpp"

namespace atla {

double tla_integrand(const TlaGains& g, double q, double a_z, double a_z_ref) {
  return g.K_theta * q + g.K_a * (a_z_ref - g.K_az * a_z);
}

double tla_output(const TlaGains& g, const TlaState& s, double q) {
  return g.K_q * q + s.integrator;
}

TlaGains scale_gains(const TlaGains& g, double alpha_tla,
                     const GainMask& mask) {
  TlaGains out = g;
  if (mask.K_q) out.K_q *= alpha_tla;
  if (mask.K_theta) out.K_theta *= alpha_tla;
  if (mask.K_a) out.K_a *= alpha_tla;
  if (mask.K_az) out.K_az *= alpha_tla;
  return out;
}

}  // namespace atla
