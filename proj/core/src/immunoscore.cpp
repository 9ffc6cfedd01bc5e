#include "timsim/immunoscore.hpp"

#include <algorithm>
#include <cmath>

#include "timsim/errors.hpp"

namespace timsim {

ScoreRegions make_score_regions(const ScalarField& tumour0, double core_radius,
                                double core_area_fraction) {
  if (!(core_radius > 0.0))
    throw ConfigError("score core radius must be > 0");
  if (!(core_area_fraction > 0.0 && core_area_fraction <= 1.0))
    throw ConfigError("score core area fraction must be in (0, 1]");
  const Grid& g = tumour0.grid;
  ScoreRegions regions;
  regions.centre = centre_of_mass(tumour0);
  regions.core.assign(static_cast<std::size_t>(g.site_count()), 0);
  regions.margin.assign(static_cast<std::size_t>(g.site_count()), 0);

  const double r_core2 = core_radius * core_radius;
  const double r_outer2 = r_core2 / core_area_fraction;
  // Sites exactly on a boundary circle belong to the inner region; inflate
  // the squared radii by a relative epsilon to keep round-off from dropping
  // them.
  const double core_lim = r_core2 * (1.0 + 1e-12);
  const double outer_lim = r_outer2 * (1.0 + 1e-12);
  for (int idx = 0; idx < g.site_count(); ++idx) {
    const auto pos = g.position(idx);
    const double dx = pos[0] - regions.centre[0];
    const double dy = pos[1] - regions.centre[1];
    const double d2 = dx * dx + dy * dy;
    if (d2 <= core_lim) {
      regions.core[static_cast<std::size_t>(idx)] = 1;
      ++regions.core_sites;
    } else if (d2 <= outer_lim) {
      regions.margin[static_cast<std::size_t>(idx)] = 1;
      ++regions.margin_sites;
    }
  }
  const int total = regions.core_sites + regions.margin_sites;
  if (total == 0) throw ConfigError("score regions contain no lattice sites");
  regions.core_weight = static_cast<double>(regions.core_sites) / total;
  regions.margin_weight = static_cast<double>(regions.margin_sites) / total;
  return regions;
}

RegionCounts region_counts(const ScalarField& c, const ScoreRegions& regions) {
  if (c.v.size() != regions.core.size())
    throw NumericError("region_counts: field does not match regions");
  const double vol = c.grid.cell_volume();
  RegionCounts counts;
  for (std::size_t i = 0; i < c.v.size(); ++i) {
    if (regions.core[i])
      counts.core += c.v[i];
    else if (regions.margin[i])
      counts.margin += c.v[i];
  }
  counts.core *= vol;
  counts.margin *= vol;
  return counts;
}

double infiltration_score(const ScalarField& c, const ScoreRegions& regions) {
  const RegionCounts counts = region_counts(c, regions);
  return regions.core_weight * counts.core +
         regions.margin_weight * counts.margin;
}

std::string phenotype_label(Phenotype ph) {
  switch (ph) {
    case Phenotype::cold: return "cold";
    case Phenotype::altered_excluded: return "altered_excluded";
    case Phenotype::altered_immunosuppressed: return "altered_immunosuppressed";
    case Phenotype::hot: return "hot";
  }
  return "unknown";
}

Phenotype classify(double score, const RegionCounts& counts,
                   const ClassifyThresholds& thresholds) {
  if (score < thresholds.t_low) return Phenotype::cold;
  if (score > thresholds.t_high) return Phenotype::hot;
  // Altered band: distinguish by where the infiltrate sits.  The one-cell
  // offset keeps the ratio finite for an empty core.
  const double ratio = counts.margin / (counts.core + 1.0);
  return ratio > thresholds.exclusion_ratio ? Phenotype::altered_excluded
                                            : Phenotype::altered_immunosuppressed;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw NumericError("percentile of an empty sample");
  if (q < 0.0) q = 0.0;
  if (q > 1.0) q = 1.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace timsim
