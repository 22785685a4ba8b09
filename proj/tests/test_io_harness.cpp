#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "padeforge/errors.hpp"
#include "padeforge/harness.hpp"
#include "padeforge/io.hpp"
#include "test_helpers.hpp"

using namespace padeforge;
using testutil::throws_kind;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("JSON wire formats") {
  const ComplexPoly p{cplx(1.0, 2.0), 0.5};
  const json jp = to_json(p);
  CHECK(jp.dump() == R"({"coeffs":[[1.0,2.0],[0.5,0.0]]})");
  CHECK(poly_from_json(jp) == p);

  const TaylorSeries s({1.0, 1.0, 1.0});
  CHECK(series_from_json(to_json(s)) == s);

  const auto r = compute_pade(exp_series(4), {1, 1});
  const json jr = to_json(r);
  CHECK(jr["p"] == 1);
  CHECK(jr["den"][0] == json::array({1.0, 0.0}));
  const auto rb = approximant_from_json(jr);
  CHECK(rb.numerator == r.numerator);
  CHECK(rb.denominator == r.denominator);
  json broken = jr;
  broken["den"][0] = json::array({2.0, 0.0});
  CHECK(throws_kind([&] { approximant_from_json(broken); }, ErrorKind::ParseError));

  for (const auto& region : {Region::whole_plane(), Region::disk({0.1, 0.0}, 2.0),
                             Region::plane_minus_disks({{3.0, 0.5}, {{0.0, -2.0}, 0.25}}),
                             Region::rect({-1.0, -1.0}, {2.0, 0.5})}) {
    CHECK(region_from_json(json::parse(to_json(region).dump())) == region);
  }
  const auto holed = region_from_json(json::parse(R"({"kind":"plane_minus_disks","disks":[{"center":[3,0],"radius":0.5}]})"));
  CHECK(holed.dist_to_complement(0.0) == doctest::Approx(2.5));

  CHECK(target_from_json(json::parse(R"({"coeffs":[[1,0]]})")).kind == TargetKind::polynomial);
  const auto rat = target_from_json(json::parse(R"({"kind":"rational","num":[[1,0]],"den":[[1,0],[-0.5,0]]})"));
  CHECK(rat.kind == TargetKind::rational);
  CHECK(rat.value.den == ComplexPoly{1.0, -0.5});

  CHECK(throws_kind([] { region_from_json(json::parse(R"({"kind":"annulus"})")); }, ErrorKind::ParseError));
  CHECK(throws_kind([] { poly_from_json(json::parse(R"({"coeffs":[[1]]})")); }, ErrorKind::ParseError));
  CHECK(throws_kind([] { series_from_json(json::parse(R"({"coef":[]})")); }, ErrorKind::ParseError));
  CHECK(throws_kind([] { read_json_file("/nonexistent/file.json"); }, ErrorKind::ParseError));
}

TEST_CASE("format_number") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("table: exp coefficients") {
  const auto rows = pade_table(exp_series(8), 4, 4, Region::whole_plane(), 2);
  REQUIRE(rows.size() == 25);
  const auto csv = lines_of(table_csv(rows));
  REQUIRE(csv.size() == 27);
  CHECK(csv[0] == kSchemaVersion);
  CHECK(csv[1] == "p,q,in_Dpq,condition_estimate,order_residual,sup_err_Kn,pole_free,status");
  // [1/1] = (1+z/2)/(1-z/2) has its pole at z = 2, a grid point of K_2
  const auto& c11 = rows[1 * 5 + 1];
  CHECK(c11.p == 1);
  CHECK(c11.q == 1);
  REQUIRE(c11.sup_err_Kn);
  CHECK(std::isinf(*c11.sup_err_Kn));
  CHECK(c11.pole_free == false);
  for (const auto& r : rows) {
    if (r.q == 0) CHECK(r.order_residual == 0.0);
    if (r.in_Dpq) CHECK(*r.order_residual <= 1e-9);
  }
}

TEST_CASE("table: [1/1] error matches the hand approximant where finite") {
  const Region disk = Region::disk(0.0, 1.0);
  const auto rows = pade_table(exp_series(8), 1, 1, disk, 2);
  const auto K = exhaustion_K(disk, 2);
  // errors are measured against the series itself, here S_8 of exp
  const auto S8 = partial_sum(exp_series(8), 8);
  const double want = sup_norm([&](cplx z) { return (1.0 + z / 2.0) / (1.0 - z / 2.0) - S8(z); }, K);
  REQUIRE(rows[3].sup_err_Kn);
  CHECK(*rows[3].sup_err_Kn == doctest::Approx(want).epsilon(1e-10));
  CHECK(rows[3].pole_free == true);
}

TEST_CASE("table: 1 + z^2 leaves cell (1,1) empty") {
  const auto rows = pade_table(TaylorSeries({1.0, 0.0, 1.0, 0.0, 0.0}), 1, 1, Region::whole_plane(), 2);
  const auto& c11 = rows[3];
  CHECK_FALSE(c11.in_Dpq);
  CHECK_FALSE(c11.order_residual);
  CHECK_FALSE(c11.sup_err_Kn);
  CHECK_FALSE(c11.pole_free);
  const auto csv = lines_of(table_csv(rows));
  const auto cells = split(csv.back());
  REQUIRE(cells.size() == 8);
  CHECK(cells[2] == "false");
  CHECK(cells[4].empty());
  CHECK(cells[5].empty());
  CHECK(cells[6].empty());
}

TEST_CASE("table rejects insufficient truncation") {
  CHECK(throws_kind([] { pade_table(exp_series(3), 2, 2, Region::whole_plane(), 2); }, ErrorKind::InsufficientTruncation));
}

TEST_CASE("schedules") {
  const auto d = parse_schedule("diag:3");
  CHECK(d.kind == ApproximationSchedule::Kind::diagonal);
  CHECK(d.pairs == std::vector<PadeIndex>{{1, 1}, {2, 2}, {3, 3}});
  const auto r = parse_schedule("row:2");
  CHECK(r.pairs.size() == 8);
  CHECK(r.pairs.front() == PadeIndex{1, 2});
  CHECK(parse_schedule("row:0:4").pairs.back() == PadeIndex{4, 0});

  ApproximationSchedule bad{ApproximationSchedule::Kind::custom, {{2, 1}, {2, 2}}};
  CHECK(throws_kind([&] { bad.validate(); }, ErrorKind::InvalidArgument));
  ApproximationSchedule diag_bad{ApproximationSchedule::Kind::diagonal, {{1, 1}, {2, 1}}};
  CHECK(throws_kind([&] { diag_bad.validate(); }, ErrorKind::InvalidArgument));
  CHECK(throws_kind([] { ApproximationSchedule{}.validate(); }, ErrorKind::InvalidArgument));
  CHECK(throws_kind([] { parse_schedule("diag:x"); }, ErrorKind::ParseError));

  const auto dir = std::filesystem::temp_directory_path() / "padeforge_schedule_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "s.json";
  write_text_file(file, R"({"kind":"custom","pairs":[[0,1],[3,1]]})");
  CHECK(parse_schedule(file.string()).pairs == std::vector<PadeIndex>{{0, 1}, {3, 1}});
}

TEST_CASE("converge: exp diagonal on |z| <= 2") {
  const auto schedule = parse_schedule("diag:8");
  const auto rows = converge(exp_series(reference_truncation(schedule)), schedule, Region::whole_plane(), 2);
  REQUIRE(rows.size() == 8);
  for (const auto& r : rows) CHECK(r.in_Dpq);
  const double e2 = *rows[1].sup_errors[1];
  const double e8 = *rows[7].sup_errors[1];
  CHECK(e8 < 1e-6);
  CHECK(e2 / e8 >= 1e4);
  const auto csv = lines_of(convergence_csv(rows, 2));
  CHECK(csv[1] == "m,p,q,in_Dpq,sup_err_K1,sup_err_K2,pole_free,status");
}

TEST_CASE("converge: geometric [0/1] is exact") {
  const ApproximationSchedule s{ApproximationSchedule::Kind::custom, {{0, 1}}};
  // K_1, K_2 of the unit disk sit in |z| <= 1/2, where the 64-term reference is exact to 2^-64
  const auto rows = converge(geometric_series(64), s, Region::disk(0.0, 1.0), 2);
  for (const auto& e : rows[0].sup_errors) {
    REQUIRE(e);
    CHECK(*e < 1e-12);
  }
}

TEST_CASE("converge: partial sums recover a cubic") {
  const TaylorSeries cubic({1.0, -2.0, 0.5, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  const auto rows = converge(cubic, parse_schedule("row:0:6"), Region::whole_plane(), 3);
  for (const auto& r : rows) {
    if (r.p < 3) continue;
    for (const auto& e : r.sup_errors) {
      REQUIRE(e);
      CHECK(*e <= 1e-12);
    }
  }
}

TEST_CASE("converge names the first unsupported pair") {
  try {
    converge(exp_series(5), parse_schedule("diag:4"), Region::whole_plane(), 2);
    FAIL("expected InsufficientTruncation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientTruncation);
    CHECK(std::string(e.what()).find("(3,3)") != std::string::npos);
  }
}

TEST_CASE("run_density: simply connected and general routes, deterministic output") {
  const auto a = run_density(Target::polynomial(ComplexPoly::constant(1.0)), {2, 1}, Region::whole_plane(), 2, 10, 2,
                             0.1, 7, 20);
  CHECK(a.report.passed());
  REQUIRE(a.lemma22_delta);
  CHECK(*a.lemma22_delta > 0.0);
  const auto b = run_density(Target::polynomial(ComplexPoly::constant(1.0)), {2, 1}, Region::whole_plane(), 2, 10, 2,
                             0.1, 7, 20);
  CHECK(density_certificate_text(a, 7, 20) == density_certificate_text(b, 7, 20));
  CHECK(density_report_text(a) == density_report_text(b));

  const auto g = run_density(Target::rational(ComplexPoly::constant(1.0), ComplexPoly{1.0, -1.0 / 3.0}), {1, 2},
                             Region::plane_minus_disks({{3.0, 0.5}}), 2, 10, 2, 0.1, 7, 0);
  CHECK(g.report.passed());
  CHECK(g.certificate.runge_step == RungeStep::pole_audit);
  CHECK_FALSE(g.lemma22_delta);
  const auto report = json::parse(density_report_text(g));
  CHECK(report["pass"] == true);
  CHECK(report["clauses"].size() == g.report.clauses.size());

  CHECK(throws_kind([] { run_density(Target::polynomial(ComplexPoly::constant(1.0)), {0, 1}, Region::whole_plane(), 2,
                                     10, 2, 0.1, 7, 0); },
                    ErrorKind::IndexTooSmall));
}

TEST_CASE("table output is deterministic") {
  const auto a = table_csv(pade_table(exp_series(10), 4, 4, Region::disk(0.0, 3.0), 3));
  const auto b = table_csv(pade_table(exp_series(10), 4, 4, Region::disk(0.0, 3.0), 3));
  CHECK(a == b);
}
