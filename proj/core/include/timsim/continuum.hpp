#pragma once

#include <cstdint>
#include <vector>

#include "timsim/grid.hpp"
#include "timsim/params.hpp"

namespace timsim {

/// State of the deterministic continuum model: tumour density n, T-cell
/// density c and chemoattractant density phi on the lattice nodes.
struct ContinuumState {
  ScalarField n;
  ScalarField c;
  ScalarField phi;
};

/// Tumour update: n' = n * (1 + tau*(alpha_n - mu_n*rho_n - zeta_n*K)).
/// `kill` is the contact-kill exposure field and `rho_n` the total tumour
/// mass, both evaluated on the step-k state.  Throws StepSizeError if the
/// growth factor goes negative anywhere.
void continuum_step_n(ScalarField& n, const ScalarField& kill, double rho_n,
                      const ModelParams& p);

/// T-cell update in conservative flux form.  For each interior lattice face
/// between sites l and r (per axis):
///
///   F = (beta_c/chi) * (c_r * psi(w_l) - c_l * psi(w_r))
///     - b_plus * c_l * psi(w_r) + b_minus * c_r * psi(w_l)
///
/// with upwind advection speeds b = gamma_c*(phi_r - phi_l)/chi split into
/// b_plus/b_minus, and zero flux on boundary faces.  The first (random
/// movement) term equals the face-averaged diffusion+aggregation split
///
///   beta_c*psi(w_f)*(c_r - c_l)/chi - beta_c*c_f*psi'(w_f)*(w_r - w_l)/chi,
///   w_f = (w_l+w_r)/2, c_f = (c_l+c_r)/2,
///
/// identically wherever both endpoints lie on the same branch of the
/// piecewise-linear psi; on faces straddling w_max the product form is used
/// because the face-averaged split overdraws the crowded side (see the
/// implementation note).  Then
///
///   c' = c + (tau/chi) * div(F) + tau*(alpha_c*r - mu_c*rho_c*c)
///
/// where the source r injects mass at rate alpha_c * phi_tot * chi per
/// vessel site (a density increment of alpha_c * phi_tot * chi / chi^dim at
/// the node) — the same per-vessel arrival rate the stochastic engine uses
/// for its Bernoulli influx trials, so the two engines' inflow mass rates
/// are identical by construction — and rho_c is the step-k total T-cell
/// mass.  The crowding field w = n_k + c_k
/// uses the buffered step-k tumour density.  A heuristic CFL bound
/// tau * (2*dim*beta_c/chi^2 + 2*gamma_c*max|grad phi|/chi) <= 1 is checked
/// during the face sweep; violations throw StepSizeError.
///
/// Positivity: the donor-weighted fluxes keep every outflow proportional to
/// the density it drains, so sites cannot go materially negative; round-off
/// undershoots are clamped to zero and the restored mass (in cells) is
/// returned so callers can budget it.  Non-finite values throw NumericError.
double continuum_step_c(ScalarField& c, const ScalarField& n_k,
                        const ScalarField& phi, double rho_c, double phi_tot,
                        const std::vector<int>& vessel_sites,
                        const ModelParams& p, std::vector<double>& scratch);

/// Deterministic continuum engine.  Each step applies the tumour update, the
/// T-cell update and the chemoattractant update, all reading the step-k
/// state (the tumour density is buffered so the T-cell and chemoattractant
/// updates see the pre-update values).
class ContinuumEngine {
 public:
  ContinuumEngine(ContinuumState init, const ModelParams& params,
                  std::vector<int> vessel_sites);

  void step();

  const ContinuumState& state() const { return state_; }
  /// Parameters as run, with a derived gamma_c resolved to its value.
  const ModelParams& params() const { return params_; }
  long steps_done() const { return steps_; }
  double time() const { return steps_ * params_.tau; }

  double tumour_mass() const { return total_mass(state_.n); }
  double tcell_mass() const { return total_mass(state_.c); }
  double chemo_mass() const { return total_mass(state_.phi); }
  double phi_peak() const { return phi_peak_; }
  double phi_cap() const { return phi_cap_; }

  /// Cumulative T-cell mass (cells) restored by positivity clamping.  With
  /// donor-weighted fluxes this tracks round-off only; the step fails with
  /// StepSizeError once it exceeds one cell, since that would mean the
  /// scheme is manufacturing material mass.
  double clamped_mass() const { return clamped_mass_; }

 private:
  ModelParams params_;
  ContinuumState state_;
  std::vector<int> vessels_;
  double phi_cap_ = 0.0;
  double phi_peak_ = 0.0;
  double clamped_mass_ = 0.0;
  long steps_ = 0;

  ScalarField n_buffer_;
  ScalarField kill_buffer_;
  std::vector<double> prefix_;     // row prefix sums for the kill stencil
  std::vector<int> kill_widths_;   // per row offset: half-width of the disc
  std::vector<double> scratch_;
  std::vector<double> chemo_scratch_;
};

}  // namespace timsim
