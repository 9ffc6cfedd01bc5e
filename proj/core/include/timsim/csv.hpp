#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "timsim/run.hpp"

namespace timsim {

/// All floats in the CSV outputs are printed with 9 significant digits.
std::string format_float(double x);

/// Header `t,rho_n,rho_c,phi_tot,immunoscore`, one row per output interval.
void write_timeseries(std::ostream& out, const std::vector<TimeSeriesRow>& rows);

/// Aggregate form with variance columns:
/// `t,rho_n,rho_c,phi_tot,immunoscore,var_rho_n,var_rho_c,var_phi_tot,var_immunoscore`.
void write_timeseries(std::ostream& out, const std::vector<TimeSeriesRow>& mean,
                      const std::vector<TimeSeriesRow>& variance);

/// One field snapshot as a row-major matrix, `points` rows by `points`
/// columns (a single row in 1D), comma-separated.
void write_snapshot(std::ostream& out, const ScalarField& field);

/// Snapshot filename: `{field}_{t:.3f}.csv`.
std::string snapshot_filename(const std::string& field, double t);

/// Header `alpha_phi,w_max,immunoscore_f,immunoscore_f_norm,rho_n_final,
/// rho_c_final,label`.  The normalised column is min-max over the successful
/// cells; failed cells carry NaN metrics and the label `failed`.
void write_sweep(std::ostream& out, const std::vector<SweepCell>& cells);

/// Header `environment,treatment,zeta_n,alpha_c,alpha_n,alpha_phi,w_max,
/// t_final,rho_n_final,rho_c_final,immunoscore_f,label`.
void write_therapy(std::ostream& out, const std::vector<TherapyOutcome>& rows);

}  // namespace timsim
