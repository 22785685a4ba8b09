// pade: Padé tables, convergence runs and density certificates from the
// command line. Exit status: 0 success, 1 failed verification, 2 bad input.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "padeforge/errors.hpp"
#include "padeforge/harness.hpp"
#include "padeforge/io.hpp"

namespace pf = padeforge;

namespace {

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") std::cout << text;
  else pf::write_text_file(out, text);
}

int report_status(const pf::VerificationReport& report) {
  if (const auto* bad = report.first_failure()) {
    std::cerr << "verification failed at clause " << bad->clause << " (measured "
              << pf::format_number(bad->measured) << ", bound " << pf::format_number(bad->bound) << ")";
    if (!bad->detail.empty()) std::cerr << ": " << bad->detail;
    std::cerr << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pade approximants, compact exhaustions and density certificates"};
  app.require_subcommand(1);

  std::string series_spec;
  std::string region_file;
  std::string out;
  int pmax = 0;
  int qmax = 0;
  int n = 1;

  auto* table = app.add_subcommand("table", "Sweep [p/q] over 0..pmax x 0..qmax");
  table->add_option("--series", series_spec, "exp | geom | series JSON file")->required();
  table->add_option("--pmax", pmax)->required()->check(CLI::NonNegativeNumber);
  table->add_option("--qmax", qmax)->required()->check(CLI::NonNegativeNumber);
  table->add_option("--region", region_file, "region JSON file")->required();
  table->add_option("--n", n, "exhaustion index of the error compact")->required()->check(CLI::PositiveNumber);
  table->add_option("--out", out, "CSV output (default stdout)");

  std::string schedule_spec;
  int nmax = 1;
  auto* conv = app.add_subcommand("converge", "Errors along an index schedule on K_1..K_nmax");
  conv->add_option("--series", series_spec, "exp | geom | series JSON file")->required();
  conv->add_option("--schedule", schedule_spec, "diag:M | row:Q[:M] | schedule JSON file")->required();
  conv->add_option("--region", region_file, "region JSON file")->required();
  conv->add_option("--nmax", nmax)->required()->check(CLI::PositiveNumber);
  conv->add_option("--out", out, "CSV output (default stdout)");

  std::string target_file;
  int p = 0;
  int q = 0;
  int s = 1;
  int big_n = 1;
  double eps = 0.1;
  std::uint64_t seed = 0;
  int trials = 200;
  auto* dens = app.add_subcommand("density", "Build and verify a density certificate");
  dens->add_option("--target", target_file, "target JSON (polynomial or rational)")->required();
  dens->add_option("--p", p)->required()->check(CLI::NonNegativeNumber);
  dens->add_option("--q", q)->required()->check(CLI::NonNegativeNumber);
  dens->add_option("--region", region_file, "region JSON file")->required();
  dens->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  dens->add_option("--s", s)->required()->check(CLI::PositiveNumber);
  dens->add_option("--bigN", big_n)->required()->check(CLI::PositiveNumber);
  dens->add_option("--eps", eps)->required()->check(CLI::PositiveNumber);
  dens->add_option("--seed", seed, "seed of the continuity-lemma search")->required();
  dens->add_option("--trials", trials, "perturbation trials per delta (0 skips the search)")
      ->check(CLI::NonNegativeNumber);
  dens->add_option("--out", out, "output directory")->required();

  std::string cert_file;
  auto* ver = app.add_subcommand("verify", "Re-verify a certificate JSON file");
  ver->add_option("--cert", cert_file)->required();
  ver->add_option("--out", out, "report JSON output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto pitch = pf::GridPitch::from_env();
    if (*table) {
      const auto series = pf::series_from_spec(series_spec, pmax + qmax + 20);
      const auto region = pf::region_from_json(pf::read_json_file(region_file));
      emit(pf::table_csv(pf::pade_table(series, pmax, qmax, region, n, pitch)), out);
      return 0;
    }
    if (*conv) {
      const auto schedule = pf::parse_schedule(schedule_spec);
      const auto series = pf::series_from_spec(series_spec, pf::reference_truncation(schedule));
      const auto region = pf::region_from_json(pf::read_json_file(region_file));
      emit(pf::convergence_csv(pf::converge(series, schedule, region, nmax, pitch), nmax), out);
      return 0;
    }
    if (*dens) {
      const auto target = pf::target_from_json(pf::read_json_file(target_file));
      const auto region = pf::region_from_json(pf::read_json_file(region_file));
      const auto run = pf::run_density(target, {p, q}, region, n, s, big_n, eps, seed, trials, pitch);
      std::filesystem::create_directories(out);
      const std::filesystem::path dir(out);
      pf::write_text_file(dir / "certificate.json", pf::density_certificate_text(run, seed, trials));
      pf::write_text_file(dir / "report.json", pf::density_report_text(run));
      return report_status(run.report);
    }
    if (*ver) {
      const auto cert = pf::certificate_from_json(pf::read_json_file(cert_file));
      const auto report = pf::verify_certificate(cert, pitch);
      emit(pf::to_json(report).dump(2) + "\n", out);
      return report_status(report);
    }
  } catch (const pf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
