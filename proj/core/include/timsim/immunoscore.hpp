#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "timsim/grid.hpp"

namespace timsim {

/// Scoring regions derived from the initial tumour density: the tumour core
/// is the closed disc of radius `core_radius` around the tumour centre of
/// mass, the invasive margin is the annulus out to
/// core_radius / sqrt(core_area_fraction) (so the core covers that fraction
/// of the full region's area).  Membership is decided per lattice site by
/// Euclidean distance.
struct ScoreRegions {
  std::array<double, 2> centre{};
  std::vector<std::uint8_t> core;    ///< 1 if the site is in the core disc
  std::vector<std::uint8_t> margin;  ///< 1 if the site is in the margin annulus
  int core_sites = 0;
  int margin_sites = 0;
  /// Area weights |core| / |core + margin| and |margin| / |core + margin|,
  /// computed from site counts.
  double core_weight = 0.0;
  double margin_weight = 0.0;
};

ScoreRegions make_score_regions(const ScalarField& tumour0, double core_radius,
                                double core_area_fraction);

/// T-cell counts inside the two regions for a density field c.
struct RegionCounts {
  double core = 0.0;
  double margin = 0.0;
};
RegionCounts region_counts(const ScalarField& c, const ScoreRegions& regions);

/// Density-weighted infiltration score
///   I = core_weight * (count in core) + margin_weight * (count in margin).
double infiltration_score(const ScalarField& c, const ScoreRegions& regions);

enum class Phenotype {
  cold,
  altered_excluded,
  altered_immunosuppressed,
  hot,
};

std::string phenotype_label(Phenotype ph);

struct ClassifyThresholds {
  /// Scores below t_low are cold, above t_high hot; defaults are the 33rd
  /// and 66th percentiles of the final scores over the reference
  /// (secretion-rate x capacity) parameter sweep.
  double t_low = 9.0;
  double t_high = 80.0;
  /// Within the altered band: excluded if margin/(core + one cell) exceeds
  /// this ratio, immunosuppressed otherwise.
  double exclusion_ratio = 1.0;
};

/// Classify a final-time score given the per-region T-cell counts.
Phenotype classify(double score, const RegionCounts& counts,
                   const ClassifyThresholds& thresholds);

/// Percentile with linear interpolation between order statistics (the same
/// convention as numpy's default); q in [0, 1].
double percentile(std::vector<double> values, double q);

}  // namespace timsim
