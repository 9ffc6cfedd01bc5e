#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace timsim {

/// Regular lattice on [0, length]^dim with `points` nodes per axis,
/// spacing chi = length / (points - 1).  Node (i) in 1D or (i, j) in 2D sits
/// at x = i * chi (and y = j * chi).  Flat storage is row-major: index(i) = i
/// in 1D, index(i, j) = i * points + j in 2D.
struct Grid {
  int dim = 2;
  int points = 61;
  double length = 1.0;

  /// Throws ConfigError unless dim is 1 or 2, points >= 2, length > 0.
  void validate() const;

  double spacing() const { return length / static_cast<double>(points - 1); }

  /// Volume of one lattice cell, chi^dim.  Converts site amplitudes
  /// (counts or per-site quantities) to densities and back.
  double cell_volume() const;

  int site_count() const {
    int n = points;
    for (int d = 1; d < dim; ++d) n *= points;
    return n;
  }

  int index(int i, int j = 0) const { return dim == 1 ? i : i * points + j; }
  std::array<int, 2> coords(int idx) const {
    return dim == 1 ? std::array<int, 2>{idx, 0}
                    : std::array<int, 2>{idx / points, idx % points};
  }
  /// Physical position of a site.  In 1D the second component is 0.
  std::array<double, 2> position(int idx) const;

  bool in_bounds(int i, int j = 0) const {
    if (i < 0 || i >= points) return false;
    return dim == 1 || (j >= 0 && j < points);
  }
};

/// A scalar density field sampled on the lattice nodes (units: amount per
/// unit volume, i.e. site amplitude / chi^dim).
struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), v(static_cast<std::size_t>(g.site_count()), fill) {}

  double& operator[](int idx) { return v[static_cast<std::size_t>(idx)]; }
  double operator[](int idx) const { return v[static_cast<std::size_t>(idx)]; }
  int size() const { return static_cast<int>(v.size()); }
};

/// Total mass of a density field: sum_i f_i * chi^dim.  Uses compensated
/// summation so the result is insensitive to site ordering.
double total_mass(const ScalarField& f);

/// Compensated sum of raw site values (no cell-volume factor).
double site_sum(const std::vector<double>& v);
std::int64_t site_sum(const std::vector<std::int64_t>& v);

/// Centre of mass of a non-negative field with positive total mass.
/// Throws NumericError on zero mass.
std::array<double, 2> centre_of_mass(const ScalarField& f);

/// Volume-exclusion factor: psi(w) = 1 - w / w_max for 0 <= w <= w_max,
/// 0 for w > w_max.
inline double crowding_factor(double w, double w_max) {
  if (w >= w_max) return 0.0;
  return 1.0 - w / w_max;
}

/// One-sided derivative of the crowding factor; at the kink w == w_max the
/// left value -1/w_max is used.
inline double crowding_factor_deriv(double w, double w_max) {
  if (w > w_max) return 0.0;
  return -1.0 / w_max;
}

/// Integer lattice offsets (di[, dj]) whose Euclidean length is <= radius:
/// (di^2 + dj^2) * chi^2 <= radius^2.  Includes the zero offset.
std::vector<std::array<int, 2>> disc_offsets(const Grid& g, double radius);

/// Contact-kill exposure field.  For T-cell density c, K_i = sum over sites p
/// within Euclidean distance `radius` of site i of c_p * chi^dim, i.e. the
/// number of T cells within reach of site i.
ScalarField kill_field(const ScalarField& c, double radius);

/// Same exposure computed directly from per-site T-cell counts.
std::vector<double> kill_field_counts(const Grid& g,
                                      const std::vector<std::int64_t>& counts,
                                      double radius);

/// Chemotactic normalisation constant: max(max_i phi0_i, A * w_max).
double phi_ceiling(const ScalarField& phi0, double A, double w_max);

}  // namespace timsim
