#pragma once

#include <cstdint>
#include <vector>

#include "timsim/grid.hpp"
#include "timsim/params.hpp"
#include "timsim/rng.hpp"

namespace timsim {

/// State of the stochastic lattice model: per-site integer counts for the
/// two cell populations and the continuous chemoattractant density.
struct HybridState {
  Grid grid;
  std::vector<std::int64_t> tumour;
  std::vector<std::int64_t> tcell;
  ScalarField phi;
};

/// Stochastic lattice engine.
///
/// Each step of length tau applies, in order:
///   1. T-cell random movement: each cell tries each of the 2*dim directions
///      with probability (lambda/(2*dim)) * psi(w_dest); moves off the
///      lattice are aborted.
///   2. T-cell chemotaxis: from the post-movement positions, each cell moves
///      up the chemoattractant gradient with probability
///      gamma_c * tau/chi^2 * psi(w_dest) * max(phi_dest - phi_src, 0)
///      per direction (the normalised form nu * psi * dphi / (2*dim*phi_cap)
///      with nu = gamma_c*2*dim*phi_cap*tau/chi^2; phi_cap cancels).
///   3. T-cell death with probability tau * mu_c * rho_c, then one Bernoulli
///      influx trial per vessel site with probability
///      tau * alpha_c * phi_tot * chi. The spacing factor converts the total
///      chemoattractant amount into a per-vessel arrival rate that stays a
///      valid probability (and leaves headroom for the supported alpha_c and
///      alpha_phi ranges) at the reference step size; the continuum engine
///      injects the identical mass rate so the two engines agree by
///      construction.
///   4. Tumour division/death: per site a multinomial split with
///      p_div = tau * alpha_n and p_die = tau * (mu_n*rho_n + zeta_n*K_i);
///      daughters are placed on the parent site.
///   5. Chemoattractant update reading the just-updated tumour counts.
///
/// All rates (rho_n, rho_c, phi_tot, the crowding field w, the kill exposure
/// K and the gradient field phi) are frozen at the start of the step, so the
/// per-cell trials within a step are exchangeable and a per-site multinomial
/// draw is distributionally identical to per-cell sampling.
class HybridEngine {
 public:
  /// Validates counts (non-negative), phi (finite, non-negative), vessel
  /// indices, and the probability bounds; throws ConfigError on violation.
  HybridEngine(HybridState init, const ModelParams& params,
               std::vector<int> vessel_sites, std::uint64_t seed);

  /// Advance one time step.  Throws StepSizeError if any per-event
  /// probability leaves [0, 1].
  void step();

  const HybridState& state() const { return state_; }
  /// Parameters as run, with a derived gamma_c resolved to its value.
  const ModelParams& params() const { return params_; }
  long steps_done() const { return steps_; }
  double time() const { return steps_ * params_.tau; }

  /// Total tumour-cell count (equals the mass of the density field).
  double tumour_mass() const;
  /// Total T-cell count.
  double tcell_mass() const;
  /// Total chemoattractant mass, sum phi_i * chi^dim.
  double chemo_mass() const;
  /// Largest phi value seen so far (for monitoring against phi_cap()).
  double phi_peak() const { return phi_peak_; }
  double phi_cap() const { return phi_cap_; }

  ScalarField tumour_density() const;
  ScalarField tcell_density() const;

 private:
  void move_phase(double coef_uniform, double coef_chemo,
                  const std::vector<double>& w);

  ModelParams params_;
  HybridState state_;
  std::vector<int> vessels_;
  Rng rng_;
  double phi_cap_ = 0.0;
  double phi_peak_ = 0.0;
  long steps_ = 0;

  // Reused per-step buffers.
  std::vector<double> w_;
  std::vector<std::int64_t> next_;
  std::vector<double> chemo_scratch_;
  ScalarField n_density_;
};

}  // namespace timsim
