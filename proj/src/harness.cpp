#include "padeforge/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "padeforge/errors.hpp"
#include "padeforge/io.hpp"

namespace padeforge {
namespace {

std::string pair_str(PadeIndex idx) { return "(" + std::to_string(idx.p) + "," + std::to_string(idx.q) + ")"; }

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(ErrorKind::ParseError, std::string(what) + ": not an integer: " + std::string(text));
  return value;
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }
std::string cell(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : ""; }

std::string status_of(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NotInDpq: return "not_in_Dpq";
    case ErrorKind::SingularSystem: return "singular_system";
    case ErrorKind::NonFiniteValue: return "non_finite";
    case ErrorKind::RootFindingDivergence: return "root_divergence";
    default: return std::string(to_string(e.kind()));
  }
}

std::optional<CompactGrid> maybe_grid(const Region& region, int n, const GridPitch& pitch) {
  try {
    return exhaustion_K(region, n, pitch);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::EmptyCompact) return std::nullopt;
    throw;
  }
}

// Sup error with poles reported as +inf rather than aborting the row.
double sup_error(const PadeApproximant& r, const TaylorSeries& reference, const CompactGrid& K) {
  try {
    return sup_norm([&](cplx z) { return r(z) - reference(z); }, K);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonFiniteValue) throw;
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void ApproximationSchedule::validate() const {
  if (pairs.empty()) throw Error(ErrorKind::InvalidArgument, "schedule is empty");
  for (std::size_t m = 0; m < pairs.size(); ++m) {
    const auto& pq = pairs[m];
    if (pq.p < 0 || pq.q < 0) throw Error(ErrorKind::InvalidArgument, "negative index " + pair_str(pq));
    if (m == 0) continue;
    const auto& prev = pairs[m - 1];
    if (!(pq.p > prev.p))
      throw Error(ErrorKind::InvalidArgument, "p must increase strictly at " + pair_str(pq));
    if (kind == Kind::diagonal && !(pq.q > prev.q))
      throw Error(ErrorKind::InvalidArgument, "q must increase strictly at " + pair_str(pq));
  }
}

ApproximationSchedule parse_schedule(std::string_view spec) {
  ApproximationSchedule out;
  if (spec.starts_with("diag:")) {
    const int M = parse_int(spec.substr(5), "diag length");
    out.kind = ApproximationSchedule::Kind::diagonal;
    for (int m = 1; m <= M; ++m) out.pairs.push_back({m, m});
  } else if (spec.starts_with("row:")) {
    auto rest = spec.substr(4);
    int M = 8;
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
      M = parse_int(rest.substr(colon + 1), "row length");
      rest = rest.substr(0, colon);
    }
    const int Q = parse_int(rest, "row q");
    out.kind = ApproximationSchedule::Kind::row;
    for (int m = 1; m <= M; ++m) out.pairs.push_back({m, Q});
  } else {
    const auto j = read_json_file(std::string(spec));
    try {
      const auto kind = j.value("kind", std::string("custom"));
      if (kind == "diagonal") out.kind = ApproximationSchedule::Kind::diagonal;
      else if (kind == "row") out.kind = ApproximationSchedule::Kind::row;
      else if (kind == "custom") out.kind = ApproximationSchedule::Kind::custom;
      else throw Error(ErrorKind::ParseError, "unknown schedule kind \"" + kind + "\"");
      for (const auto& pq : j.at("pairs")) out.pairs.push_back({pq.at(0).get<int>(), pq.at(1).get<int>()});
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, std::string("schedule: ") + e.what());
    }
  }
  out.validate();
  return out;
}

TaylorSeries series_from_spec(std::string_view spec, int M) {
  if (spec == "exp") return exp_series(M);
  if (spec == "geom") return geometric_series(M);
  return series_from_json(read_json_file(std::string(spec)));
}

std::vector<TableRow> pade_table(const TaylorSeries& series, int pmax, int qmax, const Region& region, int n,
                                 const GridPitch& pitch) {
  if (pmax < 0 || qmax < 0) throw Error(ErrorKind::InvalidArgument, "pmax and qmax must be >= 0");
  if (series.truncation_order() < pmax + qmax)
    throw Error(ErrorKind::InsufficientTruncation, "table needs order " + std::to_string(pmax + qmax));
  const auto K = exhaustion_K(region, n, pitch);
  std::vector<TableRow> rows;
  for (int p = 0; p <= pmax; ++p) {
    for (int q = 0; q <= qmax; ++q) {
      TableRow row;
      row.p = p;
      row.q = q;
      const PadeIndex idx{p, q};
      const auto membership = hankel_determinant(series, idx);
      row.in_Dpq = membership.in_Dpq;
      row.condition_estimate = membership.condition_estimate;
      if (!row.in_Dpq) {
        row.status = "not_in_Dpq";
        rows.push_back(std::move(row));
        continue;
      }
      try {
        const auto r = compute_pade(series, idx);
        row.order_residual = order_condition_residual(series, r);
        row.sup_err_Kn = sup_error(r, series, K);
        if (std::isinf(*row.sup_err_Kn)) row.status = "non_finite";
        row.pole_free = pole_free_on(r, K, 2.0 * K.h).pole_free;
      } catch (const Error& e) {
        row.status = status_of(e);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << kSchemaVersion << "\n";
  out << "p,q,in_Dpq,condition_estimate,order_residual,sup_err_Kn,pole_free,status\n";
  for (const auto& r : rows) {
    out << r.p << ',' << r.q << ',' << (r.in_Dpq ? "true" : "false") << ',' << format_number(r.condition_estimate)
        << ',' << cell(r.order_residual) << ',' << cell(r.sup_err_Kn) << ',' << cell(r.pole_free) << ','
        << r.status << '\n';
  }
  return out.str();
}

int reference_truncation(const ApproximationSchedule& schedule) {
  int widest = 0;
  for (const auto& pq : schedule.pairs) widest = std::max(widest, pq.p + pq.q);
  return std::max(2 * widest, 64);
}

std::vector<ConvergenceRow> converge(const TaylorSeries& series, const ApproximationSchedule& schedule,
                                     const Region& region, int n_max, const GridPitch& pitch) {
  schedule.validate();
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  for (const auto& pq : schedule.pairs)
    if (series.truncation_order() < pq.p + pq.q)
      throw Error(ErrorKind::InsufficientTruncation, "pair " + pair_str(pq) + " needs order " +
                                                         std::to_string(pq.p + pq.q) + ", series has " +
                                                         std::to_string(series.truncation_order()));

  const int ref_order = std::min(series.truncation_order(), reference_truncation(schedule));
  const TaylorSeries reference(
      std::vector<cplx>(series.coeffs().begin(), series.coeffs().begin() + ref_order + 1));

  std::vector<std::optional<CompactGrid>> grids;
  for (int k = 1; k <= n_max; ++k) grids.push_back(maybe_grid(region, k, pitch));

  std::vector<ConvergenceRow> rows;
  for (std::size_t m = 0; m < schedule.pairs.size(); ++m) {
    const auto idx = schedule.pairs[m];
    ConvergenceRow row;
    row.m = static_cast<int>(m) + 1;
    row.p = idx.p;
    row.q = idx.q;
    row.sup_errors.assign(static_cast<std::size_t>(n_max), std::nullopt);
    row.in_Dpq = hankel_determinant(series, idx).in_Dpq;
    if (!row.in_Dpq) {
      row.status = "not_in_Dpq";
      rows.push_back(std::move(row));
      continue;
    }
    try {
      const auto r = compute_pade(series, idx);
      for (int k = 0; k < n_max; ++k) {
        const auto& K = grids[static_cast<std::size_t>(k)];
        if (!K) continue;
        const double err = sup_error(r, reference, *K);
        row.sup_errors[static_cast<std::size_t>(k)] = err;
        if (std::isinf(err)) row.status = "non_finite";
      }
      if (const auto& K = grids.back()) row.pole_free = pole_free_on(r, *K, 2.0 * K->h).pole_free;
    } catch (const Error& e) {
      row.status = status_of(e);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows, int n_max) {
  std::ostringstream out;
  out << kSchemaVersion << "\n";
  out << "m,p,q,in_Dpq";
  for (int k = 1; k <= n_max; ++k) out << ",sup_err_K" << k;
  out << ",pole_free,status\n";
  for (const auto& r : rows) {
    out << r.m << ',' << r.p << ',' << r.q << ',' << (r.in_Dpq ? "true" : "false");
    for (const auto& e : r.sup_errors) out << ',' << cell(e);
    out << ',' << cell(r.pole_free) << ',' << r.status << '\n';
  }
  return out.str();
}

DensityRun run_density(const Target& target, PadeIndex idx, const Region& region, int n, int s, int N, double eps,
                       std::uint64_t seed, int lemma_trials, const GridPitch& pitch) {
  ConstructionOptions opts;
  opts.pitch = pitch;
  DensityRun run;
  if (target.kind == TargetKind::polynomial && region.simply_connected()) {
    run.certificate = construct_simply_connected(target.value.num, idx, eps, region, n, s, N, opts);
  } else {
    run.certificate = construct_general(target.value.num, target.value.den, idx, eps, region, n, s, N, opts);
  }
  run.report = verify_certificate(run.certificate, pitch, opts.surrogate_cap);
  if (idx.q >= 1 && lemma_trials > 0) {
    try {
      run.lemma22_delta = lemma22_delta_search(run.certificate.f_tilde, idx, run.certificate.lambda, eps, region,
                                               lemma_trials, seed, pitch);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoDeltaFound) throw;
    }
  }
  return run;
}

std::string density_certificate_text(const DensityRun& run, std::uint64_t seed, int lemma_trials) {
  auto j = to_json(run.certificate);
  json lemma = {{"seed", seed}, {"trials", lemma_trials}};
  lemma["delta"] = run.lemma22_delta ? json(*run.lemma22_delta) : json(nullptr);
  j["lemma22"] = lemma;
  return j.dump(2) + "\n";
}

std::string density_report_text(const DensityRun& run) { return to_json(run.report).dump(2) + "\n"; }

}  // namespace padeforge
