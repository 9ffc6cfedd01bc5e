#include "timsim/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "timsim/errors.hpp"

namespace timsim {

std::string format_float(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

void write_timeseries(std::ostream& out,
                      const std::vector<TimeSeriesRow>& rows) {
  out << "t,rho_n,rho_c,phi_tot,immunoscore\n";
  for (const auto& r : rows)
    out << format_float(r.t) << ',' << format_float(r.rho_n) << ','
        << format_float(r.rho_c) << ',' << format_float(r.phi_tot) << ','
        << format_float(r.score) << '\n';
}

void write_timeseries(std::ostream& out, const std::vector<TimeSeriesRow>& mean,
                      const std::vector<TimeSeriesRow>& variance) {
  if (mean.size() != variance.size())
    throw NumericError("aggregate time series size mismatch");
  out << "t,rho_n,rho_c,phi_tot,immunoscore,"
         "var_rho_n,var_rho_c,var_phi_tot,var_immunoscore\n";
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const auto& m = mean[i];
    const auto& v = variance[i];
    out << format_float(m.t) << ',' << format_float(m.rho_n) << ','
        << format_float(m.rho_c) << ',' << format_float(m.phi_tot) << ','
        << format_float(m.score) << ',' << format_float(v.rho_n) << ','
        << format_float(v.rho_c) << ',' << format_float(v.phi_tot) << ','
        << format_float(v.score) << '\n';
  }
}

void write_snapshot(std::ostream& out, const ScalarField& field) {
  const Grid& g = field.grid;
  const int rows = g.dim == 1 ? 1 : g.points;
  const int cols = g.points;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j) out << ',';
      out << format_float(field[i * cols + j]);
    }
    out << '\n';
  }
}

std::string snapshot_filename(const std::string& field, double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", t);
  return field + "_" + buf + ".csv";
}

void write_sweep(std::ostream& out, const std::vector<SweepCell>& cells) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& c : cells) {
    if (c.failed()) continue;
    lo = std::min(lo, c.score_final);
    hi = std::max(hi, c.score_final);
  }
  const double span = hi - lo;
  out << "alpha_phi,w_max,immunoscore_f,immunoscore_f_norm,"
         "rho_n_final,rho_c_final,label\n";
  for (const auto& c : cells) {
    const double norm = c.failed()
                            ? std::numeric_limits<double>::quiet_NaN()
                            : (span > 0.0 ? (c.score_final - lo) / span : 0.0);
    out << format_float(c.alpha_phi) << ',' << format_float(c.w_max) << ','
        << format_float(c.score_final) << ',' << format_float(norm) << ','
        << format_float(c.rho_n_final) << ',' << format_float(c.rho_c_final)
        << ',' << (c.failed() ? std::string("failed") : phenotype_label(c.label))
        << '\n';
  }
}

void write_therapy(std::ostream& out, const std::vector<TherapyOutcome>& rows) {
  out << "environment,treatment,zeta_n,alpha_c,alpha_n,alpha_phi,w_max,"
         "t_final,rho_n_final,rho_c_final,immunoscore_f,label\n";
  for (const auto& r : rows)
    out << r.environment << ',' << r.treatment << ','
        << format_float(r.params.zeta_n) << ',' << format_float(r.params.alpha_c)
        << ',' << format_float(r.params.alpha_n) << ','
        << format_float(r.params.alpha_phi) << ',' << format_float(r.params.w_max)
        << ',' << format_float(r.params.t_final) << ','
        << format_float(r.rho_n_final) << ',' << format_float(r.rho_c_final)
        << ',' << format_float(r.score_final) << ',' << phenotype_label(r.label)
        << '\n';
}

}  // namespace timsim
