#pragma once

#include <cmath>
#include <limits>

#include "timsim/grid.hpp"

namespace timsim {

/// Physical and numerical parameters shared by both engines.
///
/// Rates are per day, lengths in cm, and all fields are stored as densities
/// (amount per cm^dim); per-site amplitudes are density * chi^dim.
struct ModelParams {
  // Lattice.
  int dim = 2;
  int points = 61;
  double length = 1.0;

  // Time stepping.
  double tau = 1e-4;
  double t_final = 15.0;

  // Tumour cells.
  double alpha_n = 1.5;    ///< division rate
  double mu_n = 1.25e-5;   ///< death rate per unit total tumour mass
  /// Death rate per locally reachable T cell (the immune kill efficiency).
  /// No default: every scenario must set it explicitly, it is the main
  /// experimental dial.
  double zeta_n = std::numeric_limits<double>::quiet_NaN();
  double theta = 0.048;    ///< T-cell reach radius for contact killing

  // Cytotoxic T cells.
  double alpha_c = 6.0;    ///< vessel influx rate per unit chemoattractant mass
  double mu_c = 6e-6;      ///< death rate per unit total T-cell mass
  double beta_c = 1e-3;    ///< random motility coefficient
  /// Chemotactic sensitivity.  NaN (the default, spelled `auto` in config
  /// files) derives the value at engine construction from the chemotaxis
  /// step budget: the sensitivity whose total per-step chemotaxis
  /// probability against this run's attractant ceiling phi_cap equals
  /// kChemotaxisStepBudget.  Deriving per configuration keeps the lattice
  /// probabilities valid across the whole supported w_max range while using
  /// the strongest admissible drift, and both engines resolve it through the
  /// same formula so their dynamics stay directly comparable.
  double gamma_c = std::numeric_limits<double>::quiet_NaN();
  double w_max = 2.96e5;   ///< crowding capacity (max total local density)

  // Chemoattractant.
  double beta_phi = 0.1;   ///< diffusivity
  double alpha_phi = 1.5;  ///< secretion rate per tumour cell
  double kappa_phi = 2.0;  ///< decay rate
  double A = 1.0;          ///< ceiling factor: phi_cap = max(max phi0, A*w_max)

  Grid grid() const { return Grid{dim, points, length}; }

  /// Total per-step random-movement probability lambda = beta_c * 2 * dim *
  /// tau / chi^2 (split evenly over the 2*dim directions).
  double move_probability() const {
    const double chi = grid().spacing();
    return beta_c * 2.0 * dim * tau / (chi * chi);
  }

  /// Fraction of the unit per-step probability budget granted to chemotaxis
  /// when gamma_c is derived (see gamma_c above).
  static constexpr double kChemotaxisStepBudget = 0.9;

  /// The chemotactic sensitivity to run with against a given attractant
  /// ceiling: the explicit gamma_c when one was set, otherwise the derived
  /// value kChemotaxisStepBudget * chi^2 / (2 * dim * phi_cap * tau).
  double resolved_gamma_c(double phi_cap) const {
    if (!std::isnan(gamma_c)) return gamma_c;
    const double chi = grid().spacing();
    return kChemotaxisStepBudget * chi * chi / (2.0 * dim * phi_cap * tau);
  }

  /// Total per-step chemotaxis probability bound nu = gamma_c * 2 * dim *
  /// phi_cap * tau / chi^2 for a given ceiling phi_cap.
  double chemotaxis_probability(double phi_cap) const {
    const double chi = grid().spacing();
    return gamma_c * 2.0 * dim * phi_cap * tau / (chi * chi);
  }

  /// Largest stable time step for the explicit chemoattractant update:
  /// chi^2 / (2 * dim * beta_phi).
  double chemo_stability_limit() const {
    const double chi = grid().spacing();
    return chi * chi / (2.0 * dim * beta_phi);
  }

  /// Throws ConfigError on any violated bound.  Checks that do not depend on
  /// the initial state (the chemotaxis bound needs phi_cap and is enforced by
  /// the engines at construction).
  void validate() const;
};

}  // namespace timsim
