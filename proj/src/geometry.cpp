#include "padeforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "padeforge/errors.hpp"
#include "padeforge/roots.hpp"

namespace padeforge {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

std::string point_str(cplx z) {
  return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

}  // namespace

Region::Region(Shape shape) : shape_(std::move(shape)) {
  std::visit(overloaded{
                 [](const WholePlane&) {},
                 [](const OpenDisk& d) {
                   if (!(d.disk.radius > 0.0))
                     throw Error(ErrorKind::InvalidArgument, "disk radius must be positive");
                 },
                 [](const PlaneMinusDisks& pm) {
                   for (const auto& h : pm.holes)
                     if (!(h.radius >= 0.0))
                       throw Error(ErrorKind::InvalidArgument, "removed disk radius must be >= 0");
                 },
                 [](const OpenRect& r) {
                   if (!(r.min.real() < r.max.real() && r.min.imag() < r.max.imag()))
                     throw Error(ErrorKind::InvalidArgument, "rect needs min < max in both axes");
                 },
             },
             shape_);
  if (!contains(0.0)) throw Error(ErrorKind::InvalidArgument, "region must contain 0");
}

bool Region::simply_connected() const noexcept {
  if (const auto* pm = std::get_if<PlaneMinusDisks>(&shape_)) return pm->holes.empty();
  return true;
}

double Region::dist_to_complement(cplx z) const noexcept {
  return std::visit(overloaded{
                        [](const WholePlane&) { return kInf; },
                        [&](const OpenDisk& d) { return std::max(0.0, d.disk.radius - std::abs(z - d.disk.center)); },
                        [&](const PlaneMinusDisks& pm) {
                          double best = kInf;
                          for (const auto& h : pm.holes)
                            best = std::min(best, std::max(0.0, std::abs(z - h.center) - h.radius));
                          return best;
                        },
                        [&](const OpenRect& r) {
                          const double dx = std::min(z.real() - r.min.real(), r.max.real() - z.real());
                          const double dy = std::min(z.imag() - r.min.imag(), r.max.imag() - z.imag());
                          return std::max(0.0, std::min(dx, dy));
                        },
                    },
                    shape_);
}

double GridPitch::operator()(int n) const {
  if (fixed) return *fixed;
  return std::min(0.02, 1.0 / (4.0 * std::max(n, 1)));
}

GridPitch GridPitch::from_env() {
  GridPitch pitch;
  if (const char* env = std::getenv("PADE_GRID_H")) {
    char* end = nullptr;
    const double h = std::strtod(env, &end);
    if (end == env || !(h > 0.0) || !std::isfinite(h))
      throw Error(ErrorKind::InvalidArgument, std::string("PADE_GRID_H is not a positive number: ") + env);
    pitch.fixed = h;
  }
  return pitch;
}

double CompactGrid::max_modulus() const noexcept {
  // grid points are bounded by n, so the squares cannot overflow
  double m2 = 0.0;
  for (const auto& z : points) m2 = std::max(m2, z.real() * z.real() + z.imag() * z.imag());
  return std::sqrt(m2);
}

namespace {

CompactGrid build_grid(const Region& r, int n, double h) {
  CompactGrid K;
  K.n = n;
  K.h = h;
  K.inner_bound = 1.0 / n;
  K.outer_bound = n;
  const auto span = static_cast<long>(std::floor(n / h));
  // the disk of radius n holds about pi (n/h)^2 lattice points
  K.points.reserve(static_cast<std::size_t>(3.2 * static_cast<double>(span + 1) * static_cast<double>(span + 1)));
  for (long j = -span; j <= span; ++j) {
    for (long i = -span; i <= span; ++i) {
      const cplx z(static_cast<double>(i) * h, static_cast<double>(j) * h);
      if (std::abs(z) <= K.outer_bound && r.dist_to_complement(z) >= K.inner_bound) K.points.push_back(z);
    }
  }
  if (K.points.empty())
    throw Error(ErrorKind::EmptyCompact, "K_" + std::to_string(n) + " has no lattice point at pitch " +
                                             std::to_string(h));
  return K;
}

// Grids are pure functions of (region, n, h) and get rebuilt constantly by
// the constructors and the verifier, so the most recent ones are kept.
class GridCache {
 public:
  std::optional<CompactGrid> find(const Region& r, int n, double h) {
    std::lock_guard lock(mutex_);
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->n == n && it->h == h && it->region == r) {
        std::rotate(entries_.begin(), it, it + 1);
        return *entries_.front().grid;
      }
    }
    return std::nullopt;
  }

  void insert(const Region& r, int n, double h, const CompactGrid& K) {
    std::lock_guard lock(mutex_);
    entries_.insert(entries_.begin(), Entry{r, n, h, std::make_shared<const CompactGrid>(K)});
    if (entries_.size() > kCapacity) entries_.pop_back();
  }

 private:
  static constexpr std::size_t kCapacity = 12;
  struct Entry {
    Region region;
    int n;
    double h;
    std::shared_ptr<const CompactGrid> grid;
  };
  std::mutex mutex_;
  std::vector<Entry> entries_;
};

GridCache& grid_cache() {
  static GridCache cache;
  return cache;
}

}  // namespace

CompactGrid exhaustion_K(const Region& r, int n, double h) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "exhaustion index must be >= 1");
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "lattice pitch must be positive");
  if (auto hit = grid_cache().find(r, n, h)) return std::move(*hit);
  auto K = build_grid(r, n, h);
  grid_cache().insert(r, n, h, K);
  return K;
}

namespace {

// Extremes are tracked on |v|^2 (one sqrt at the end instead of a hypot per
// point); the hypot path only returns if the squares overflow.
template <class Better>
double extreme_modulus(const Evaluable& f, const CompactGrid& K, double init, Better better) {
  double best2 = init;
  const cplx* arg = nullptr;
  for (const auto& z : K.points) {
    const cplx v = f(z);
    if (!finite(v)) throw Error(ErrorKind::NonFiniteValue, "at " + point_str(z), z);
    const double m2 = v.real() * v.real() + v.imag() * v.imag();
    if (better(m2, best2)) {
      best2 = m2;
      arg = &z;
    }
  }
  if (arg == nullptr) return std::sqrt(init);
  if (std::isinf(best2)) {
    double best = std::sqrt(init);
    for (const auto& z : K.points) {
      const double m = std::abs(f(z));
      if (better(m, best)) best = m;
    }
    return best;
  }
  return std::sqrt(best2);
}

}  // namespace

double sup_norm(const Evaluable& f, const CompactGrid& K) {
  return extreme_modulus(f, K, 0.0, [](double a, double b) { return a > b; });
}

double inf_norm(const Evaluable& f, const CompactGrid& K) {
  return extreme_modulus(f, K, kInf, [](double a, double b) { return a < b; });
}

double rho_metric(const Evaluable& f, const Evaluable& g, std::span<const CompactGrid> grids) {
  const Evaluable diff = [&](cplx z) { return f(z) - g(z); };
  double total = 0.0;
  double weight = 1.0;
  for (const auto& K : grids) {
    weight *= 0.5;
    total += weight * std::min(sup_norm(diff, K), 1.0);
  }
  return total;
}

double rho_metric(const Evaluable& f, const Evaluable& g, const Region& r, int N_max, const GridPitch& pitch) {
  if (N_max < 1) throw Error(ErrorKind::InvalidArgument, "N_max must be >= 1");
  std::vector<CompactGrid> grids;
  grids.reserve(static_cast<std::size_t>(N_max));
  for (int n = 1; n <= N_max; ++n) {
    try {
      grids.push_back(exhaustion_K(r, n, pitch));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyCompact) throw;
      grids.push_back(CompactGrid{n, pitch(n), 1.0 / n, static_cast<double>(n), {}});
    }
  }
  return rho_metric(f, g, grids);
}

PoleCheck pole_free_on(const ComplexPoly& denominator, const CompactGrid& K, double margin) {
  if (denominator.is_zero()) throw Error(ErrorKind::InvalidArgument, "denominator is identically zero");
  PoleCheck out;
  out.roots = polynomial_roots(denominator);
  out.min_distance = kInf;
  for (const auto& root : out.roots)
    for (const auto& z : K.points) out.min_distance = std::min(out.min_distance, std::abs(root - z));
  out.pole_free = out.min_distance > margin;
  return out;
}

}  // namespace padeforge
