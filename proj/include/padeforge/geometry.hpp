#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "padeforge/pade.hpp"
#include "padeforge/power_series.hpp"

namespace padeforge {

/// Closed disk {|z - center| <= radius}; also used for open disks by context.
struct Disk {
  cplx center;
  double radius = 0.0;
  friend bool operator==(const Disk&, const Disk&) = default;
};

struct WholePlane {
  friend bool operator==(const WholePlane&, const WholePlane&) = default;
};
struct OpenDisk {
  Disk disk;
  friend bool operator==(const OpenDisk&, const OpenDisk&) = default;
};
/// The plane with finitely many closed disks removed.
struct PlaneMinusDisks {
  std::vector<Disk> holes;
  friend bool operator==(const PlaneMinusDisks&, const PlaneMinusDisks&) = default;
};
/// Open axis-aligned rectangle.
struct OpenRect {
  cplx min;
  cplx max;
  friend bool operator==(const OpenRect&, const OpenRect&) = default;
};

/// An open set containing 0, drawn from a small family with exact distance
/// formulas.
class Region {
 public:
  using Shape = std::variant<WholePlane, OpenDisk, PlaneMinusDisks, OpenRect>;

  /// Throws InvalidArgument if the shape is malformed or excludes 0.
  explicit Region(Shape shape);

  static Region whole_plane() { return Region(WholePlane{}); }
  static Region disk(cplx center, double radius) { return Region(OpenDisk{{center, radius}}); }
  static Region plane_minus_disks(std::vector<Disk> holes) { return Region(PlaneMinusDisks{std::move(holes)}); }
  static Region rect(cplx min, cplx max) { return Region(OpenRect{min, max}); }

  const Shape& shape() const noexcept { return shape_; }
  bool simply_connected() const noexcept;
  bool contains(cplx z) const noexcept { return dist_to_complement(z) > 0.0; }
  /// Euclidean distance to the complement; +inf for the whole plane, 0 outside.
  double dist_to_complement(cplx z) const noexcept;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  Shape shape_;
};

inline double dist_to_complement(const Region& r, cplx z) { return r.dist_to_complement(z); }

/// Lattice pitch as a function of the exhaustion index: min(0.02, 1/(4n))
/// unless a fixed pitch overrides it.
struct GridPitch {
  std::optional<double> fixed;

  double operator()(int n) const;
  /// Reads PADE_GRID_H if set.
  static GridPitch from_env();
};

/// Lattice sample of K_n = {z : dist(z, complement) >= 1/n, |z| <= n}.
struct CompactGrid {
  int n = 0;
  double h = 0.0;
  double inner_bound = 0.0;  // 1/n
  double outer_bound = 0.0;  // n
  std::vector<cplx> points;  // row-major: imaginary part outer, real part inner

  /// Sampled sup of |z|.
  double max_modulus() const noexcept;
};

/// Throws EmptyCompact if no lattice point qualifies.
CompactGrid exhaustion_K(const Region& r, int n, double h);
inline CompactGrid exhaustion_K(const Region& r, int n, const GridPitch& pitch = {}) {
  return exhaustion_K(r, n, pitch(n));
}

using Evaluable = std::function<cplx(cplx)>;

/// Max of |f| over the grid. Throws NonFiniteValue naming the offending point.
double sup_norm(const Evaluable& f, const CompactGrid& K);
/// Min of |f| over the grid (same error contract).
double inf_norm(const Evaluable& f, const CompactGrid& K);

/// sum_{n <= N_max} 2^-n min(||f - g||_{K_n}, 1). Empty K_n contribute 0.
double rho_metric(const Evaluable& f, const Evaluable& g, const Region& r, int N_max,
                  const GridPitch& pitch = {});
/// Same sum over precomputed grids; grids[i] plays the role of K_{i+1}.
double rho_metric(const Evaluable& f, const Evaluable& g, std::span<const CompactGrid> grids);

struct PoleCheck {
  bool pole_free = true;
  std::vector<cplx> roots;
  /// Smallest root-to-grid distance (+inf without roots).
  double min_distance = 0.0;
};

/// Roots of the denominator against the grid: pole free iff every root is
/// farther than margin from every grid point.
PoleCheck pole_free_on(const ComplexPoly& denominator, const CompactGrid& K, double margin);
inline PoleCheck pole_free_on(const PadeApproximant& r, const CompactGrid& K, double margin) {
  return pole_free_on(r.denominator, K, margin);
}

}  // namespace padeforge
