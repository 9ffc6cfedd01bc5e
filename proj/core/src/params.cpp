#include "timsim/params.hpp"

#include <cmath>
#include <string>

#include "timsim/errors.hpp"

namespace timsim {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

void ModelParams::validate() const {
  grid().validate();
  require(tau > 0.0, "tau must be > 0");
  require(std::isfinite(tau), "tau must be finite");
  require(t_final >= 0.0 && std::isfinite(t_final), "t_final must be >= 0");

  require(alpha_n >= 0.0, "alpha_n must be >= 0");
  require(mu_n >= 0.0, "mu_n must be >= 0");
  require(!std::isnan(zeta_n),
          "zeta_n is required and has no default; set it explicitly");
  require(zeta_n >= 0.0, "zeta_n must be >= 0");
  require(theta > 0.0 && theta <= length, "theta must be in (0, length]");

  require(alpha_c >= 0.0, "alpha_c must be >= 0");
  require(mu_c >= 0.0, "mu_c must be >= 0");
  require(beta_c >= 0.0, "beta_c must be >= 0");
  require(std::isnan(gamma_c) || gamma_c >= 0.0,
          "gamma_c must be >= 0 (or auto)");
  require(w_max > 0.0, "w_max must be > 0");

  require(beta_phi >= 0.0, "beta_phi must be >= 0");
  require(alpha_phi >= 0.0, "alpha_phi must be >= 0");
  require(kappa_phi >= 0.0, "kappa_phi must be >= 0");
  require(A > 0.0, "A must be > 0");

  const double lambda = move_probability();
  require(lambda <= 1.0, "random-movement probability beta_c*2*dim*tau/chi^2 = " +
                             std::to_string(lambda) +
                             " exceeds 1; decrease tau or beta_c");
  const double chemo_limit = chemo_stability_limit();
  require(beta_phi == 0.0 || tau <= chemo_limit,
          "tau = " + std::to_string(tau) +
              " exceeds the chemoattractant stability limit chi^2/(2*dim*beta_phi) = " +
              std::to_string(chemo_limit));
  require(tau * kappa_phi <= 1.0, "tau*kappa_phi must be <= 1");
}

}  // namespace timsim
