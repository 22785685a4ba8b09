#include "padeforge/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "padeforge/errors.hpp"

namespace padeforge {
namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) parse_fail(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

double number(const json& j, const char* what) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) parse_fail(std::string(what) + " is not a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) parse_fail(std::string(what) + " is not an integer");
  return j.get<int>();
}

json disk_to_json(const Disk& d) { return {{"center", to_json(d.center)}, {"radius", d.radius}}; }

Disk disk_from_json(const json& j) {
  return {complex_from_json(field(j, "center")), number(field(j, "radius"), "radius")};
}

json pair_to_json(const RationalPair& f) {
  return {{"num", coeffs_to_json(f.num.coeffs())}, {"den", coeffs_to_json(f.den.coeffs())}};
}

RationalPair pair_from_json(const json& j) {
  return {ComplexPoly(coeffs_from_json(field(j, "num"))), ComplexPoly(coeffs_from_json(field(j, "den")))};
}

const char* runge_name(RungeStep step) {
  switch (step) {
    case RungeStep::exact_q0: return "exact_q0";
    case RungeStep::taylor_surrogate: return "taylor_surrogate";
    case RungeStep::pole_audit: return "pole_audit";
  }
  return "";
}

RungeStep runge_from(const std::string& s) {
  if (s == "exact_q0") return RungeStep::exact_q0;
  if (s == "taylor_surrogate") return RungeStep::taylor_surrogate;
  if (s == "pole_audit") return RungeStep::pole_audit;
  parse_fail("unknown runge_step \"" + s + "\"");
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_fail("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json coeffs_to_json(std::span<const cplx> coeffs) {
  json out = json::array();
  for (const auto& c : coeffs) out.push_back(to_json(c));
  return out;
}

std::vector<cplx> coeffs_from_json(const json& j) {
  if (!j.is_array()) parse_fail("coefficient list must be an array");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const auto& c : j) out.push_back(complex_from_json(c));
  return out;
}

json to_json(const ComplexPoly& p) { return {{"coeffs", coeffs_to_json(p.coeffs())}}; }
ComplexPoly poly_from_json(const json& j) { return ComplexPoly(coeffs_from_json(field(j, "coeffs"))); }

json to_json(const TaylorSeries& s) { return {{"coeffs", coeffs_to_json(s.coeffs())}}; }

TaylorSeries series_from_json(const json& j) {
  auto c = coeffs_from_json(field(j, "coeffs"));
  if (c.empty()) parse_fail("series needs at least one coefficient");
  try {
    return TaylorSeries(std::move(c));
  } catch (const Error& e) {
    parse_fail(e.what());
  }
}

json to_json(const PadeApproximant& r) {
  return {{"p", r.index.p},
          {"q", r.index.q},
          {"num", coeffs_to_json(r.numerator.coeffs())},
          {"den", coeffs_to_json(r.denominator.coeffs())}};
}

PadeApproximant approximant_from_json(const json& j) {
  PadeApproximant r;
  r.index = {integer(field(j, "p"), "p"), integer(field(j, "q"), "q")};
  r.numerator = ComplexPoly(coeffs_from_json(field(j, "num")));
  r.denominator = ComplexPoly(coeffs_from_json(field(j, "den")));
  if (r.denominator[0] != cplx{1.0, 0.0}) parse_fail("approximant den[0] must be exactly [1,0]");
  if (r.numerator.degree() > r.index.p || r.denominator.degree() > r.index.q)
    parse_fail("approximant degree exceeds its index");
  return r;
}

json to_json(const Region& r) {
  return std::visit(
      [](const auto& shape) -> json {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, WholePlane>) {
          return {{"kind", "whole_plane"}};
        } else if constexpr (std::is_same_v<T, OpenDisk>) {
          return {{"kind", "disk"}, {"center", to_json(shape.disk.center)}, {"radius", shape.disk.radius}};
        } else if constexpr (std::is_same_v<T, PlaneMinusDisks>) {
          json disks = json::array();
          for (const auto& d : shape.holes) disks.push_back(disk_to_json(d));
          return {{"kind", "plane_minus_disks"}, {"disks", disks}};
        } else {
          return {{"kind", "rect"},
                  {"min", json::array({shape.min.real(), shape.min.imag()})},
                  {"max", json::array({shape.max.real(), shape.max.imag()})}};
        }
      },
      r.shape());
}

Region region_from_json(const json& j) {
  const auto& kind_j = field(j, "kind");
  if (!kind_j.is_string()) parse_fail("region kind must be a string");
  const auto kind = kind_j.get<std::string>();
  try {
    if (kind == "whole_plane") return Region::whole_plane();
    if (kind == "disk")
      return Region::disk(complex_from_json(field(j, "center")), number(field(j, "radius"), "radius"));
    if (kind == "plane_minus_disks") {
      std::vector<Disk> holes;
      for (const auto& d : field(j, "disks")) holes.push_back(disk_from_json(d));
      return Region::plane_minus_disks(std::move(holes));
    }
    if (kind == "rect") return Region::rect(complex_from_json(field(j, "min")), complex_from_json(field(j, "max")));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    parse_fail(e.what());
  }
  parse_fail("unknown region kind \"" + kind + "\"");
}

json to_json(const Target& t) {
  if (t.kind == TargetKind::polynomial)
    return {{"kind", "polynomial"}, {"coeffs", coeffs_to_json(t.value.num.coeffs())}};
  return {{"kind", "rational"},
          {"num", coeffs_to_json(t.value.num.coeffs())},
          {"den", coeffs_to_json(t.value.den.coeffs())}};
}

Target target_from_json(const json& j) try {
  std::string kind;
  if (j.is_object() && j.contains("kind")) kind = j.at("kind").get<std::string>();
  else kind = j.is_object() && j.contains("den") ? "rational" : "polynomial";
  if (kind == "polynomial") return Target::polynomial(ComplexPoly(coeffs_from_json(field(j, "coeffs"))));
  if (kind == "rational") {
    ComplexPoly B(coeffs_from_json(field(j, "den")));
    if (B.is_zero()) parse_fail("rational target with zero denominator");
    return Target::rational(ComplexPoly(coeffs_from_json(field(j, "num"))), std::move(B));
  }
  parse_fail("unknown target kind \"" + kind + "\"");
} catch (const json::exception& e) {
  parse_fail(std::string("target: ") + e.what());
}

json to_json(const DensityCertificate& cert) {
  json audit = json::array();
  for (const auto& e : cert.pole_audit)
    audit.push_back({{"lambda", e.lambda}, {"margin", e.margin}, {"min_distance", e.min_distance}, {"pole_free", e.pole_free}});
  return {
      {"target", to_json(cert.target)},
      {"p", cert.index.p},
      {"q", cert.index.q},
      {"region", to_json(cert.region)},
      {"c", to_json(cert.c)},
      {"d", to_json(cert.d)},
      {"delta_tilde", cert.delta_tilde},
      {"delta", cert.delta},
      {"lambda", cert.lambda},
      {"r_radius", cert.r_radius},
      {"n", cert.n},
      {"s", cert.s},
      {"N", cert.N},
      {"epsilon", cert.epsilon},
      {"f_tilde", pair_to_json(cert.f_tilde)},
      {"f_final", pair_to_json(cert.f_final)},
      {"runge_step", runge_name(cert.runge_step)},
      {"surrogate_order", cert.surrogate_order},
      {"audit_horizon", cert.audit_horizon},
      {"pole_audit", audit},
      {"achieved",
       {{"sup_ftilde_minus_target", cert.achieved.sup_ftilde_minus_target},
        {"sup_pade_error_Kn", cert.achieved.sup_pade_error_Kn},
        {"sup_f_minus_target_KN", cert.achieved.sup_f_minus_target_KN},
        {"inf_denominator", cert.achieved.inf_denominator}}},
  };
}

DensityCertificate certificate_from_json(const json& j) try {
  DensityCertificate cert;
  cert.target = target_from_json(field(j, "target"));
  cert.index = {integer(field(j, "p"), "p"), integer(field(j, "q"), "q")};
  cert.region = region_from_json(field(j, "region"));
  cert.c = complex_from_json(field(j, "c"));
  cert.d = complex_from_json(field(j, "d"));
  cert.delta_tilde = number(field(j, "delta_tilde"), "delta_tilde");
  cert.delta = number(field(j, "delta"), "delta");
  cert.lambda = integer(field(j, "lambda"), "lambda");
  cert.r_radius = number(field(j, "r_radius"), "r_radius");
  cert.n = integer(field(j, "n"), "n");
  cert.s = integer(field(j, "s"), "s");
  cert.N = integer(field(j, "N"), "N");
  cert.epsilon = number(field(j, "epsilon"), "epsilon");
  cert.f_tilde = pair_from_json(field(j, "f_tilde"));
  cert.f_final = pair_from_json(field(j, "f_final"));
  const auto& step = field(j, "runge_step");
  if (!step.is_string()) parse_fail("runge_step must be a string");
  cert.runge_step = runge_from(step.get<std::string>());
  cert.surrogate_order = integer(field(j, "surrogate_order"), "surrogate_order");
  cert.audit_horizon = integer(field(j, "audit_horizon"), "audit_horizon");
  for (const auto& e : field(j, "pole_audit"))
    cert.pole_audit.push_back({integer(field(e, "lambda"), "lambda"), number(field(e, "margin"), "margin"),
                               number(field(e, "min_distance"), "min_distance"), field(e, "pole_free").get<bool>()});
  const auto& a = field(j, "achieved");
  cert.achieved.sup_ftilde_minus_target = number(field(a, "sup_ftilde_minus_target"), "achieved");
  cert.achieved.sup_pade_error_Kn = number(field(a, "sup_pade_error_Kn"), "achieved");
  cert.achieved.sup_f_minus_target_KN = number(field(a, "sup_f_minus_target_KN"), "achieved");
  cert.achieved.inf_denominator = number(field(a, "inf_denominator"), "achieved");
  return cert;
} catch (const json::exception& e) {
  parse_fail(std::string("certificate: ") + e.what());
}

json to_json(const VerificationReport& report) {
  json clauses = json::array();
  for (const auto& c : report.clauses) {
    json entry = {{"clause", c.clause}, {"bound", c.bound}, {"measured", c.measured}, {"pass", c.pass}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    clauses.push_back(std::move(entry));
  }
  return {{"pass", report.passed()}, {"clauses", clauses}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

}  // namespace padeforge
