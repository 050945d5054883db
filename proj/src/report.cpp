#include "billiards/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "billiards/error.hpp"
#include "billiards/invariants.hpp"

namespace billiards {

QuantityRecord make_record(std::string name, std::vector<double> values, CheckKind check,
                           double tolerance, std::optional<double> expected, bool applicable) {
  QuantityRecord r;
  r.name = std::move(name);
  r.values = std::move(values);
  r.check = check;
  r.tolerance = tolerance;
  r.expected = expected;
  r.applicable = applicable;
  const double count = static_cast<double>(r.values.size());
  if (!r.values.empty()) {
    r.mean = std::accumulate(r.values.begin(), r.values.end(), 0.0) / count;
    double var = 0.0;
    for (double v : r.values) {
      var += (v - r.mean) * (v - r.mean);
      r.max_dev = std::max(r.max_dev, std::abs(v - r.mean));
    }
    r.std = std::sqrt(var / count);
  }
  if (expected) {
    double worst = 0.0;
    for (double v : r.values) worst = std::max(worst, std::abs(v - *expected));
    r.residual = worst;
  }
  bool finite = std::all_of(r.values.begin(), r.values.end(), [](double v) { return std::isfinite(v); });
  switch (check) {
    case CheckKind::Info:
      r.pass = true;
      break;
    case CheckKind::MaxAbs: {
      double worst = 0.0;
      for (double v : r.values) worst = std::max(worst, std::abs(v));
      r.pass = finite && worst <= tolerance;
      break;
    }
    case CheckKind::MaxDev:
      r.pass = finite && r.max_dev <= tolerance;
      break;
    case CheckKind::StdDev:
      r.pass = finite && r.std <= tolerance;
      break;
    case CheckKind::Equals:
      r.pass = finite && r.residual && *r.residual <= tolerance;
      break;
  }
  if (!applicable) r.pass = true;
  return r;
}

const QuantityRecord* InvariantReport::find(const std::string& name) const {
  for (const auto& q : quantities) {
    if (q.name == name) return &q;
  }
  return nullptr;
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

bool all_pass(const std::vector<QuantityRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; });
}

}  // namespace

FamilyInfo describe(const SupportCurve& curve) {
  std::ostringstream os;
  os << std::setprecision(17);
  if (const auto* e = curve.as_ellipse()) {
    os << "ellipse a1=" << e->a1 << " a2=" << e->a2;
  } else {
    const auto* t = curve.as_trig_poly();
    os << "trig_poly c0=" << t->c0;
    for (const auto& hk : t->harmonics) os << " [" << hk.k << ":" << hk.a << ":" << hk.b << "]";
  }
  return {os.str(), std::nullopt, std::nullopt, std::nullopt, std::nullopt};
}

FamilyInfo describe(const PonceletFamily& family) {
  FamilyInfo info = describe(family.table);
  info.lambda = family.caustic.lambda;
  info.ac = family.caustic.ac;
  info.bc = family.caustic.bc;
  info.J = family.J;
  return info;
}

InvariantReport verify_family(const PonceletFamily& family, const VerifyOptions& options) {
  const auto& e = *family.table.as_ellipse();
  const int n = family.n;
  const double ac = family.caustic.ac;
  const double bc = family.caustic.bc;
  const double c = std::sqrt((e.a1 - e.a2) * (e.a1 + e.a2));
  const double scale = options.tol / 1e-9;
  const double diam = family.table.diameter();
  const auto sweep = family_sweep(family, options.samples, options.execution);
  const std::size_t m = sweep.size();

  std::vector<double> phase(m), psi1(m), L(m), J(m), J_dev(m), s_minus_l(m), hprime(m),
      vertex(m), cor_sin2(m), cor_cos_alpha(m), cor_h2(m), cor_cos2psi(m), sin2psi(m),
      cos_beta(m), cm_x(m), cm_y(m), sum_pq2(m), pedal_s1(m), pedal_s2(m), focal_dev(m),
      prod_f1(m), prod_f2(m), prod_o(m), closure(m), symmetry(m);
  bool circle = false;
  std::vector<QuadResiduals> quads;

  for (std::size_t s = 0; s < m; ++s) {
    const auto& poly = sweep[s];
    phase[s] = poly.phase;
    psi1[s] = poly.psis.front();
    L[s] = poly.perimeter;
    const auto js = joachimsthal(family.table, poly);
    J[s] = js.mean;
    J_dev[s] = js.max_deviation;
    const auto t1 = check_theorem1(family.table, poly);
    s_minus_l[s] = t1.sum_s_minus_l;
    hprime[s] = t1.sum_hprime_sin;
    vertex[s] = check_vertex_identity(family.table, poly);
    const auto cor = corollary_sums(family.table, poly, family.J);
    cor_sin2[s] = cor.sin2_delta;
    cor_cos_alpha[s] = cor.cos_alpha;
    cor_h2[s] = cor.h_squared;
    cor_cos2psi[s] = cor.cos_2psi;
    sin2psi[s] = cor.sin_2psi;
    circle = cor.cos_2psi_skipped;
    cos_beta[s] = product_cos_beta(poly);
    const auto pedal = pedal_stats(poly, options.pedal_point);
    cm_x[s] = pedal.center_of_mass.x1;
    cm_y[s] = pedal.center_of_mass.x2;
    sum_pq2[s] = pedal.sum_sq;
    const auto sums = vanishing_pedal_sums(poly);
    pedal_s1[s] = sums.s1;
    pedal_s2[s] = sums.s2;
    double worst = 0.0;
    for (const auto& line : poly.side_lines) {
      const auto d = focal_distances(line, c);
      worst = std::max(worst, std::abs(d.d1 * d.d2 - bc * bc) / (bc * bc));
    }
    focal_dev[s] = worst;
    const auto fp = focal_products(poly, family.table, family.caustic);
    prod_f1[s] = fp.prod_f1;
    prod_f2[s] = fp.prod_f2;
    prod_o[s] = fp.prod_o;
    closure[s] = poly.closure_residual;
    double sym = 0.0;
    if (n % 2 == 0) {
      for (int i = 0; i < n / 2; ++i) {
        sym = std::max(sym, norm(poly.vertices[i] + poly.vertices[i + n / 2]));
      }
    }
    symmetry[s] = sym;
    if (n == 4) quads.push_back(check_quad_relations(family, poly));
  }

  const double L_mean = mean_of(L);
  const double J_mean = mean_of(J);
  const bool even = n % 2 == 0;
  const bool quad = n % 4 == 0;
  const std::optional<double> no_value;

  std::vector<QuantityRecord> q;
  q.push_back(make_record("phase", phase, CheckKind::Info, 0.0));
  q.push_back(make_record("psi1", psi1, CheckKind::Info, 0.0));
  q.push_back(make_record("L", L, CheckKind::StdDev, 1e-9 * scale * L_mean));
  q.push_back(make_record("J", J, CheckKind::StdDev, 1e-11 * scale * J_mean));
  q.push_back(make_record("sum_S_minus_L", s_minus_l, CheckKind::MaxAbs, 1e-9 * scale * L_mean, 0.0));
  q.push_back(make_record("sum_hprime_sin", hprime, CheckKind::MaxAbs, 1e-9 * scale * e.a1, 0.0));
  if (n == 4) {
    q.push_back(make_record("prod_cos_beta", cos_beta, CheckKind::Equals, 1e-10 * scale, 0.0));
  } else {
    q.push_back(make_record("prod_cos_beta", cos_beta, CheckKind::StdDev,
                            1e-7 * scale * std::abs(mean_of(cos_beta))));
  }
  q.push_back(make_record("cm_x", cm_x, CheckKind::MaxDev, 1e-9 * scale * e.a1));
  q.push_back(make_record("cm_y", cm_y, CheckKind::MaxDev, 1e-9 * scale * e.a1));
  q.push_back(make_record("sum_pq2", sum_pq2, CheckKind::StdDev, 1e-9 * scale * mean_of(sum_pq2)));
  const double expected_f = std::pow(bc, n);
  const double expected_o = std::pow(ac * bc, n / 2);
  const double product_tol = (n == 4 ? 1e-9 : 1e-8) * scale;
  q.push_back(make_record("prod_F1", prod_f1, even ? CheckKind::Equals : CheckKind::Info,
                          product_tol * expected_f, even ? std::optional(expected_f) : no_value,
                          even));
  q.push_back(make_record("prod_F2", prod_f2, even ? CheckKind::Equals : CheckKind::Info,
                          product_tol * expected_f, even ? std::optional(expected_f) : no_value,
                          even));
  q.push_back(make_record("prod_O", prod_o, quad ? CheckKind::Equals : CheckKind::Info,
                          product_tol * expected_o, quad ? std::optional(expected_o) : no_value,
                          quad));
  q.push_back(make_record("sum_sin2psi", sin2psi, CheckKind::MaxAbs, 1e-9 * scale * n, 0.0));
  q.push_back(make_record("max_vertex_residual", vertex, CheckKind::MaxAbs, 1e-10 * scale * diam, 0.0));
  q.push_back(make_record("closure_residual", closure, CheckKind::MaxAbs, options.tol * e.a1, 0.0));

  q.push_back(make_record("J_vertex_spread", J_dev, CheckKind::MaxAbs, 1e-11 * scale * J_mean, 0.0));
  q.push_back(make_record("trig_sin2_delta", cor_sin2, CheckKind::MaxAbs,
                          1e-9 * scale * family.J * L_mean, 0.0));
  q.push_back(make_record("trig_cos_alpha", cor_cos_alpha, CheckKind::MaxAbs, 1e-9 * scale * n, 0.0));
  q.push_back(make_record("trig_h_squared", cor_h2, CheckKind::MaxAbs, 1e-9 * scale * L_mean, 0.0));
  q.push_back(make_record("trig_cos_2psi", cor_cos2psi, circle ? CheckKind::Info : CheckKind::MaxAbs,
                          1e-9 * scale * n, circle ? no_value : std::optional(0.0), !circle));
  q.push_back(make_record("pedal_sin_cos", pedal_s1, CheckKind::MaxAbs, 1e-8 * scale, 0.0));
  q.push_back(make_record("pedal_sin_sin", pedal_s2, CheckKind::MaxAbs, 1e-8 * scale, 0.0));
  // A side line stored in doubles is tangent only to within ~ε·a1 in p, which
  // moves d1·d2 by up to 2(a1 + c)·δp; on thin caustics that exceeds 1e-12·bc².
  const double focal_floor =
      8.0 * std::numeric_limits<double>::epsilon() * e.a1 * (e.a1 + c) / (bc * bc);
  q.push_back(make_record("focal_d1d2_rel_dev", focal_dev, CheckKind::MaxAbs,
                          std::max(1e-12, focal_floor) * scale, 0.0));
  q.push_back(make_record("central_symmetry", symmetry, even ? CheckKind::MaxAbs : CheckKind::Info,
                          1e-9 * scale * e.a1, even ? std::optional(0.0) : no_value, even));
  if (n == 4) {
    // Closed forms of the 4-periodic family: semi-perimeter 2(ac + bc), J = 1/(ac + bc).
    q.push_back(make_record("L_closed_form", L, CheckKind::Equals, 1e-9 * scale * 4.0 * (ac + bc),
                            4.0 * (ac + bc)));
    q.push_back(make_record("J_closed_form", J, CheckKind::Equals, 1e-9 * scale / (ac + bc),
                            1.0 / (ac + bc)));
    auto column = [&](auto member) {
      std::vector<double> v;
      for (const auto& r : quads) v.push_back(std::abs(r.*member));
      return v;
    };
    const double qt = 1e-9 * scale;
    q.push_back(make_record("quad_pair", column(&QuadResiduals::pair_major), CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_pair_minor", column(&QuadResiduals::pair_minor), CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_tangent_orthogonality", column(&QuadResiduals::tangent_orthogonality),
                            CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_psi_gap", column(&QuadResiduals::psi_gap), CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_delta_sum", column(&QuadResiduals::delta_sum), CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_support_cos", column(&QuadResiduals::support_cos), CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_tan_delta", column(&QuadResiduals::tan_delta), CheckKind::MaxAbs,
                            1e-8 * scale, 0.0));
    q.push_back(make_record("quad_p1p2", column(&QuadResiduals::p1p2), CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_p1p2_closed_form", column(&QuadResiduals::p1p2_closed_form),
                            CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_ratio", column(&QuadResiduals::ratio), CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_joachimsthal", column(&QuadResiduals::joachimsthal), CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_orthogonality_eq", column(&QuadResiduals::orthogonality_eq),
                            CheckKind::MaxAbs, qt, 0.0));
    q.push_back(make_record("quad_orthoptic", column(&QuadResiduals::orthoptic), CheckKind::MaxAbs, qt, 0.0));
  }

  InvariantReport report;
  report.family = describe(family);
  report.quantities = std::move(q);
  report.pass = all_pass(report.quantities);
  return report;
}

InvariantReport verify_generic(const SupportCurve& curve, const BilliardPolygon& polygon,
                               double tol) {
  const double scale = tol / 1e-9;
  const double L = polygon.perimeter;
  const auto t1 = check_theorem1(curve, polygon);
  const auto sums = vanishing_pedal_sums(polygon);
  std::vector<QuantityRecord> q;
  q.push_back(make_record("L", {L}, CheckKind::Info, 0.0));
  q.push_back(make_record("sum_S_minus_L", {t1.sum_s_minus_l}, CheckKind::MaxAbs, 1e-8 * scale * L, 0.0));
  q.push_back(make_record("sum_hprime_sin", {t1.sum_hprime_sin}, CheckKind::MaxAbs,
                          1e-8 * scale * curve.scale(), 0.0));
  q.push_back(make_record("max_vertex_residual", {check_vertex_identity(curve, polygon)},
                          CheckKind::MaxAbs, 1e-10 * scale * curve.diameter(), 0.0));
  q.push_back(make_record("pedal_sin_cos", {sums.s1}, CheckKind::MaxAbs, 1e-8 * scale, 0.0));
  q.push_back(make_record("pedal_sin_sin", {sums.s2}, CheckKind::MaxAbs, 1e-8 * scale, 0.0));
  q.push_back(make_record("reflection_law_residual", {reflection_law_residual(polygon)},
                          CheckKind::MaxAbs, 1e-8 * scale, 0.0));
  q.push_back(make_record("closure_residual", {polygon.closure_residual}, CheckKind::MaxAbs,
                          tol * curve.diameter(), 0.0));
  InvariantReport report;
  report.family = describe(curve);
  report.quantities = std::move(q);
  report.pass = all_pass(report.quantities);
  return report;
}

const std::vector<std::string>& sweep_csv_columns() {
  static const std::vector<std::string> columns = {
      "sample", "phase", "psi1", "L", "J", "sum_S_minus_L", "sum_hprime_sin",
      "prod_cos_beta", "cm_x", "cm_y", "sum_pq2", "prod_F1", "prod_F2", "prod_O",
      "sum_sin2psi", "max_vertex_residual", "closure_residual"};
  return columns;
}

std::string sweep_csv(const InvariantReport& report) {
  const auto& columns = sweep_csv_columns();
  std::vector<const QuantityRecord*> records;
  for (std::size_t c = 1; c < columns.size(); ++c) {
    const auto* r = report.find(columns[c]);
    if (r == nullptr) throw Error(ErrorKind::InvalidArgument, "report lacks column " + columns[c]);
    records.push_back(r);
  }
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  const std::size_t rows = records.front()->values.size();
  for (std::size_t s = 0; s < rows; ++s) {
    os << s;
    for (const auto* r : records) os << ',' << format_number(r->values.at(s));
    os << '\n';
  }
  return os.str();
}

namespace {

const char* check_name(CheckKind kind) {
  switch (kind) {
    case CheckKind::Info: return "info";
    case CheckKind::MaxAbs: return "max_abs";
    case CheckKind::MaxDev: return "max_dev";
    case CheckKind::StdDev: return "std";
    case CheckKind::Equals: return "equals";
  }
  return "info";
}

CheckKind check_from_name(const std::string& name) {
  if (name == "max_abs") return CheckKind::MaxAbs;
  if (name == "max_dev") return CheckKind::MaxDev;
  if (name == "std") return CheckKind::StdDev;
  if (name == "equals") return CheckKind::Equals;
  return CheckKind::Info;
}

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> optional_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& h : c.coeffs) coeffs.push_back({{"k", h.k}, {"a", h.a}, {"b", h.b}});
  return {{"command", c.command}, {"a1", c.a1},       {"a2", c.a2},
          {"n", c.n},             {"k", c.k},         {"samples", c.samples},
          {"tol", c.tol},         {"px", c.px},       {"py", c.py},
          {"seed", c.seed},       {"harmonics", c.harmonics}, {"coeffs", coeffs},
          {"format", c.format},   {"out", c.out},     {"parallel", c.parallel}};
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.a1 = j.at("a1").get<double>();
  c.a2 = j.at("a2").get<double>();
  c.n = j.at("n").get<int>();
  c.k = j.at("k").get<int>();
  c.samples = j.at("samples").get<int>();
  c.tol = j.at("tol").get<double>();
  c.px = j.at("px").get<double>();
  c.py = j.at("py").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.harmonics = j.at("harmonics").get<int>();
  for (const auto& h : j.at("coeffs")) {
    c.coeffs.push_back({h.at("k").get<int>(), h.at("a").get<double>(), h.at("b").get<double>()});
  }
  c.format = j.at("format").get<std::string>();
  c.out = j.at("out").get<std::string>();
  c.parallel = j.at("parallel").get<bool>();
  return c;
}

nlohmann::json to_json(const InvariantReport& r) {
  nlohmann::json quantities = nlohmann::json::array();
  for (const auto& q : r.quantities) {
    quantities.push_back({{"name", q.name},
                          {"values", q.values},
                          {"mean", q.mean},
                          {"std", q.std},
                          {"max_dev", q.max_dev},
                          {"expected", optional_json(q.expected)},
                          {"residual", optional_json(q.residual)},
                          {"check", check_name(q.check)},
                          {"tolerance", q.tolerance},
                          {"applicable", q.applicable},
                          {"pass", q.pass}});
  }
  return {{"config", to_json(r.config)},
          {"metadata", {{"version", r.version}, {"timestamp", r.timestamp}}},
          {"family",
           {{"table", r.family.table},
            {"lambda", optional_json(r.family.lambda)},
            {"ac", optional_json(r.family.ac)},
            {"bc", optional_json(r.family.bc)},
            {"J", optional_json(r.family.J)}}},
          {"quantities", quantities},
          {"pass", r.pass},
          {"error", optional_json(r.error)}};
}

InvariantReport report_from_json(const nlohmann::json& j) {
  InvariantReport r;
  r.config = config_from_json(j.at("config"));
  r.version = j.at("metadata").at("version").get<std::string>();
  r.timestamp = j.at("metadata").at("timestamp").get<std::string>();
  const auto& f = j.at("family");
  r.family.table = f.at("table").get<std::string>();
  r.family.lambda = optional_from<double>(f, "lambda");
  r.family.ac = optional_from<double>(f, "ac");
  r.family.bc = optional_from<double>(f, "bc");
  r.family.J = optional_from<double>(f, "J");
  for (const auto& q : j.at("quantities")) {
    QuantityRecord rec;
    rec.name = q.at("name").get<std::string>();
    rec.values = q.at("values").get<std::vector<double>>();
    rec.mean = q.at("mean").get<double>();
    rec.std = q.at("std").get<double>();
    rec.max_dev = q.at("max_dev").get<double>();
    rec.expected = optional_from<double>(q, "expected");
    rec.residual = optional_from<double>(q, "residual");
    rec.check = check_from_name(q.at("check").get<std::string>());
    rec.tolerance = q.at("tolerance").get<double>();
    rec.applicable = q.at("applicable").get<bool>();
    rec.pass = q.at("pass").get<bool>();
    r.quantities.push_back(std::move(rec));
  }
  r.pass = j.at("pass").get<bool>();
  r.error = optional_from<std::string>(j, "error");
  return r;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace billiards
