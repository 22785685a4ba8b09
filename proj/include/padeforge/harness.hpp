#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "padeforge/density.hpp"
#include "padeforge/geometry.hpp"
#include "padeforge/pade.hpp"
#include "padeforge/power_series.hpp"

namespace padeforge {

/// First line of every CSV artifact.
inline constexpr std::string_view kSchemaVersion = "pade-forge/v1";

struct ApproximationSchedule {
  enum class Kind { diagonal, row, custom };
  Kind kind = Kind::custom;
  std::vector<PadeIndex> pairs;

  /// Nonempty, nonnegative, p strictly increasing; diagonal schedules also
  /// need strictly increasing q. Throws InvalidArgument.
  void validate() const;
};

/// "diag:M" -> (m,m) for m = 1..M; "row:Q" or "row:Q:M" -> (m,Q) for
/// m = 1..M (default 8); anything else is read as a JSON schedule file
/// {"kind": "diagonal"|"row"|"custom", "pairs": [[p,q], ...]}.
ApproximationSchedule parse_schedule(std::string_view spec);

/// "exp" and "geom" are generated through order M; anything else is a series
/// file whose own truncation is used.
TaylorSeries series_from_spec(std::string_view spec, int M);

struct TableRow {
  int p = 0;
  int q = 0;
  bool in_Dpq = false;
  double condition_estimate = 0.0;
  // Empty whenever no approximant exists for the cell.
  std::optional<double> order_residual;
  std::optional<double> sup_err_Kn;
  std::optional<bool> pole_free;
  std::string status = "ok";
};

/// Sweeps [p/q] for 0 <= p <= pmax, 0 <= q <= qmax (p outer). Cell failures
/// are recorded in the row's status; only invalid inputs throw.
std::vector<TableRow> pade_table(const TaylorSeries& series, int pmax, int qmax, const Region& region, int n,
                                 const GridPitch& pitch = {});
std::string table_csv(const std::vector<TableRow>& rows);

struct ConvergenceRow {
  int m = 0;
  int p = 0;
  int q = 0;
  bool in_Dpq = false;
  /// sup |[p/q] - f| on K_1..K_nmax; empty for empty K_n or missing approximant.
  std::vector<std::optional<double>> sup_errors;
  std::optional<bool> pole_free;  // against K_nmax
  std::string status = "ok";
};

/// The reference function is the series truncated at
/// min(M, max(2 * max(p+q), 64)). Throws InsufficientTruncation naming the
/// first pair the series cannot support.
std::vector<ConvergenceRow> converge(const TaylorSeries& series, const ApproximationSchedule& schedule,
                                     const Region& region, int n_max, const GridPitch& pitch = {});
std::string convergence_csv(const std::vector<ConvergenceRow>& rows, int n_max);

/// Reference truncation used by converge() for a schedule.
int reference_truncation(const ApproximationSchedule& schedule);

struct DensityRun {
  DensityCertificate certificate;
  VerificationReport report;
  std::optional<double> lemma22_delta;  // empirical delta, when searched
};

/// Routes to the simply connected constructor for polynomial targets on
/// simply connected regions, and to the general one otherwise (a polynomial
/// on a multiply connected region is treated as P/1).
DensityRun run_density(const Target& target, PadeIndex idx, const Region& region, int n, int s, int N, double eps,
                       std::uint64_t seed, int lemma_trials = 200, const GridPitch& pitch = {});

/// Certificate JSON plus the lemma search record.
std::string density_certificate_text(const DensityRun& run, std::uint64_t seed, int lemma_trials);
std::string density_report_text(const DensityRun& run);

std::string format_number(double x);

}  // namespace padeforge
