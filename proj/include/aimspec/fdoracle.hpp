#pragma once

#include <vector>

#include "aimspec/families.hpp"
#include "aimspec/separation.hpp"

namespace aimspec {

/// Uniform grid in x = ln r with Dirichlet ends at r_min and r_max.
struct FdGrid {
  double r_min = 1e-12;
  double r_max = 1e10;
  int n_points = 10000;
  /// Throws ConfigError unless n_points >= 200, r_min > 0, r_min <= 1e-4 r_max.
  void validate() const;
};

/// r_min = 1e-12 a0, r_max = 1e10 a0, a0 = hbar^2/(m0 * Coulomb strength).
FdGrid default_fd_grid(const PotentialSpec& spec, const PhysicalContext& ctx);

struct FdLevel {
  /// Richardson value (4 E_fine - E_coarse)/3.
  double E = 0.0;
  double E_coarse = 0.0;
  double E_fine = 0.0;
  /// Interior sign changes of the fine-grid eigenvector.
  int nodes = 0;
  /// Weighted norm carried by the last 5% of the grid.
  double tail = 0.0;
  /// Coarse-grid interior points and outer radius actually used.
  int n_points = 0;
  double r_max = 0.0;
};

/// Lowest `count` bound levels of the separated radial equation below the
/// continuum threshold (fewer if the well holds fewer). The grid is refined
/// until coarse and fine grids agree to 1e-7 relative and r_max is expanded
/// until the tail carries < 1e-10; UnresolvedStateError if the grids still
/// disagree by more than 1e-5.
std::vector<FdLevel> fd_radial_levels(const PotentialSpec& spec, const PhysicalContext& ctx,
                                      double ell, int count, const FdGrid& grid);

std::vector<double> fd_radial_eigenvalues(const PotentialSpec& spec, const PhysicalContext& ctx,
                                          double ell, int count, const FdGrid& grid);

/// Single-grid eigenvalues without extrapolation, for convergence studies.
std::vector<double> fd_raw_eigenvalues(const PotentialSpec& spec, const PhysicalContext& ctx,
                                       double ell, int count, const FdGrid& grid);

/// E above which the radial spectrum is continuous.
double continuum_threshold(const PotentialSpec& spec, const PhysicalContext& ctx, double ell);

}  // namespace aimspec
