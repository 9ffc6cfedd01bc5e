#include "timsim/grid.hpp"

#include <algorithm>
#include <cmath>

#include "timsim/errors.hpp"

namespace timsim {

void Grid::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("grid dim must be 1 or 2");
  if (points < 2) throw ConfigError("grid points must be >= 2");
  if (!(length > 0.0)) throw ConfigError("grid length must be > 0");
}

double Grid::cell_volume() const {
  const double chi = spacing();
  return dim == 1 ? chi : chi * chi;
}

std::array<double, 2> Grid::position(int idx) const {
  const auto ij = coords(idx);
  const double chi = spacing();
  return {ij[0] * chi, dim == 1 ? 0.0 : ij[1] * chi};
}

namespace {

// Kahan-compensated accumulation keeps reductions independent of magnitude
// spread across sites.
double kahan_sum(const double* x, std::size_t n) {
  double s = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = x[i] - comp;
    const double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace

double site_sum(const std::vector<double>& v) {
  return kahan_sum(v.data(), v.size());
}

std::int64_t site_sum(const std::vector<std::int64_t>& v) {
  std::int64_t s = 0;
  for (const auto x : v) s += x;
  return s;
}

double total_mass(const ScalarField& f) {
  return site_sum(f.v) * f.grid.cell_volume();
}

std::array<double, 2> centre_of_mass(const ScalarField& f) {
  double mass = 0.0, mx = 0.0, my = 0.0;
  for (int idx = 0; idx < f.size(); ++idx) {
    const double fi = f[idx];
    if (fi == 0.0) continue;
    const auto pos = f.grid.position(idx);
    mass += fi;
    mx += fi * pos[0];
    my += fi * pos[1];
  }
  if (!(mass > 0.0)) throw NumericError("centre_of_mass: field has no mass");
  return {mx / mass, my / mass};
}

std::vector<std::array<int, 2>> disc_offsets(const Grid& g, double radius) {
  const double chi = g.spacing();
  // Sites exactly on the boundary circle belong to the disc; inflate the
  // squared radius by a relative epsilon so round-off in radius/chi cannot
  // drop them.
  const double q = radius / chi;
  const double r2 = q * q * (1.0 + 1e-9) + 1e-12;
  const int reach = static_cast<int>(std::floor(std::sqrt(r2)));
  std::vector<std::array<int, 2>> out;
  if (g.dim == 1) {
    for (int di = -reach; di <= reach; ++di)
      if (di * di <= r2) out.push_back({di, 0});
    return out;
  }
  for (int di = -reach; di <= reach; ++di)
    for (int dj = -reach; dj <= reach; ++dj)
      if (di * di + dj * dj <= r2) out.push_back({di, dj});
  return out;
}

namespace {

// Scatter each source amplitude onto every site within the disc.  By the
// symmetry of the disc this equals the gather form K_i = sum_{|x_p - x_i| <=
// r} amp_p.  Offsets falling off the lattice are simply skipped (no
// wrap-around, no mirroring).
template <typename Amp>
std::vector<double> scatter_disc(const Grid& g, const Amp* amp, double radius,
                                 double scale) {
  const auto offs = disc_offsets(g, radius);
  std::vector<double> K(static_cast<std::size_t>(g.site_count()), 0.0);
  for (int idx = 0; idx < g.site_count(); ++idx) {
    const double a = static_cast<double>(amp[idx]) * scale;
    if (a == 0.0) continue;
    const auto ij = g.coords(idx);
    for (const auto& d : offs) {
      const int i = ij[0] + d[0];
      const int j = ij[1] + d[1];
      if (!g.in_bounds(i, j)) continue;
      K[static_cast<std::size_t>(g.index(i, j))] += a;
    }
  }
  return K;
}

}  // namespace

ScalarField kill_field(const ScalarField& c, double radius) {
  ScalarField K(c.grid);
  K.v = scatter_disc(c.grid, c.v.data(), radius, c.grid.cell_volume());
  return K;
}

std::vector<double> kill_field_counts(const Grid& g,
                                      const std::vector<std::int64_t>& counts,
                                      double radius) {
  return scatter_disc(g, counts.data(), radius, 1.0);
}

double phi_ceiling(const ScalarField& phi0, double A, double w_max) {
  double m = 0.0;
  for (const double x : phi0.v) m = std::max(m, x);
  return std::max(m, A * w_max);
}

}  // namespace timsim
