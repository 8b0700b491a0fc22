#include "splitcert/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <span>
#include <sstream>

#include <json.hpp>

#include "splitcert/algorithms.hpp"
#include "splitcert/errors.hpp"
#include "splitcert/problems.hpp"
#include "splitcert/rates.hpp"

namespace splitcert::report {

namespace {

using nlohmann::ordered_json;
using fejer::Provenance;

constexpr std::string_view kTraceHeader =
    "t,f_gap,alpha_t,eps_t,dist_sq_to_ref,max_subgrad_norm_so_far";
constexpr int kFormatVersion = 1;

bool known_algo(std::string_view a) {
  return a == "fb" || a == "fb-smooth" || a == "psg" || a == "inc" || a == "dr";
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> optional_from(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw ConfigError("write failed for '" + path + "'");
}

double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(where + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    auto line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = pos + 1;
  }
  return lines;
}

Provenance default_provenance(std::string_view algo) {
  if (algo == "fb") return Provenance::FbThm32;
  if (algo == "psg") return Provenance::PsThm35;
  if (algo == "inc") return Provenance::IncThm37;
  if (algo == "dr") return Provenance::DrThm310;
  if (algo == "fb-smooth") return Provenance::SmoothProp33;
  throw ConfigError("no default certificate constants for algorithm '" + std::string(algo) + "'");
}

std::vector<double> json_doubles(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ParseError(std::string("constants file: missing array '") + key + "'");
  }
  return j.at(key).get<std::vector<double>>();
}

fejer::CertificateConstants constants_from_file(const std::string& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path));
  } catch (const ordered_json::exception& e) {
    throw ParseError("constants file '" + path + "': " + e.what());
  }
  fejer::CertificateConstants c;
  c.eta = json_doubles(j, "eta");
  c.xi = json_doubles(j, "xi");
  c.value_lag = j.value("value_lag", 0);
  c.provenance = Provenance::Custom;
  return c;
}

double beta_of(const TraceBundle& b) {
  if (!b.beta_analytic || !(*b.beta_analytic > 0.0)) {
    throw ConfigError("trace carries no smoothness constant beta");
  }
  return *b.beta_analytic;
}

void require_algo(const TraceBundle& b, std::string_view algo, std::string_view theorem) {
  if (b.trace.algo_id != algo) {
    throw ConfigError(std::string(theorem) + " applies to " + std::string(algo) +
                      " traces, not '" + b.trace.algo_id + "'");
  }
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

void validate(const RunConfig& c) {
  const auto& p = problems::find_problem(c.problem_id);
  if (!known_algo(c.algo)) throw ConfigError("unknown algorithm '" + c.algo + "'");
  if (!p.allows(c.algo)) {
    throw ConfigError("algorithm '" + c.algo + "' is not available for problem '" + p.id + "'");
  }
  if (c.T < 2) throw ConfigError("T must be >= 2");
  if (c.algo != "fb-smooth") StepSchedule{c.alpha, c.theta}.validate();
  if (!(c.eps >= 0.0) || !std::isfinite(c.eps)) throw ConfigError("eps must be finite and >= 0");
  if (c.eps > 0.0 && c.algo != "fb" && c.algo != "psg") {
    throw ConfigError("eps > 0 is only supported by fb and psg");
  }
}

TraceBundle execute(const RunConfig& c) {
  validate(c);
  const auto& p = problems::find_problem(c.problem_id);
  const StepSchedule s{c.alpha, c.theta};
  TraceBundle b;
  if (c.algo == "fb") {
    b.trace = algorithms::run_forward_backward(p.spec, p.x1, s, c.eps, c.T, c.seed);
  } else if (c.algo == "fb-smooth") {
    b.trace = algorithms::run_smooth_fb(p.spec, p.x1, c.T);
  } else if (c.algo == "psg") {
    b.trace = algorithms::run_projected_subgradient(p.spec, p.x1, s, c.eps, c.T, c.seed);
  } else if (c.algo == "inc") {
    b.trace = algorithms::run_incremental(p.spec, p.x1, s, c.T);
  } else {
    b.trace = algorithms::run_douglas_rachford(p.spec, p.x1, s, c.T);
  }
  b.trace.problem_id = p.id;
  b.trace.seed = c.seed;
  b.f_star = p.f_star;
  b.x_ref = p.x_ref;
  b.B_analytic = p.B_analytic;
  b.beta_analytic = p.beta_analytic;
  b.m = p.m();
  return b;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string trace_csv(const TraceBundle& b) {
  const RunTrace& tr = b.trace;
  std::string out(kTraceHeader);
  out += '\n';
  double running = 0.0;
  for (std::size_t k = 0; k < tr.iterates.size(); ++k) {
    running = std::max({running, tr.subgrad_max_l[k], tr.subgrad_max_r[k]});
    out += std::to_string(k + 1);
    for (double v : {tr.f_values[k] - b.f_star, tr.alpha_values[k], tr.eps_values[k],
                     dist_sq(tr.iterates[k], b.x_ref), running}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string iterates_csv(const TraceBundle& b) {
  const RunTrace& tr = b.trace;
  const std::size_t n = tr.iterates.empty() ? 0 : tr.iterates.front().dim();
  std::string out = "t,f,alpha_t,eps_t,subgrad_max_l,subgrad_max_r";
  for (std::size_t i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  out += '\n';
  for (std::size_t k = 0; k < tr.iterates.size(); ++k) {
    out += std::to_string(k + 1);
    for (double v : {tr.f_values[k], tr.alpha_values[k], tr.eps_values[k], tr.subgrad_max_l[k],
                     tr.subgrad_max_r[k]}) {
      out += ',';
      out += format_double(v);
    }
    for (double v : tr.iterates[k].coords()) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string sidecar_json(const TraceBundle& b) {
  const RunTrace& tr = b.trace;
  ordered_json j;
  j["format"] = "splitcert-trace";
  j["version"] = kFormatVersion;
  j["problem_id"] = tr.problem_id;
  j["algo"] = tr.algo_id;
  j["seed"] = tr.seed;
  j["alpha"] = tr.schedule.alpha;
  j["theta"] = tr.schedule.theta;
  j["eps"] = tr.eps;
  j["T"] = tr.T();
  j["m"] = b.m;
  j["dim"] = tr.iterates.empty() ? 0 : tr.iterates.front().dim();
  j["f_star"] = b.f_star;
  j["d_sq"] = tr.iterates.empty() ? 0.0 : b.d_sq();
  j["B_analytic"] = optional_json(b.B_analytic);
  j["beta_analytic"] = optional_json(b.beta_analytic);
  j["observed_B"] = tr.iterates.empty() ? 0.0 : fejer::observed_B(tr);
  j["x_ref"] = std::vector<double>(b.x_ref.coords().begin(), b.x_ref.coords().end());
  if (!tr.f_at_z.empty()) {
    double best = tr.f_at_z.front();
    for (double v : tr.f_at_z) best = std::min(best, v);
    j["f_at_z_last"] = tr.f_at_z.back();
    j["f_at_z_best"] = best;
  }
  return j.dump(2) + "\n";
}

void write_trace(const TraceBundle& b, const std::string& path) {
  write_file(path, trace_csv(b));
  write_file(path + ".json", sidecar_json(b));
  write_file(path + ".iterates.csv", iterates_csv(b));
}

TraceBundle read_trace(const std::string& path) {
  if (!std::filesystem::exists(path)) throw ParseError("trace file '" + path + "' not found");
  ordered_json meta;
  try {
    meta = ordered_json::parse(read_file(path + ".json"));
  } catch (const ordered_json::exception& e) {
    throw ParseError("sidecar '" + path + ".json': " + e.what());
  }
  TraceBundle b;
  try {
    if (meta.value("format", "") != "splitcert-trace") throw ParseError("not a splitcert trace");
    RunTrace& tr = b.trace;
    tr.problem_id = meta.at("problem_id").get<std::string>();
    tr.algo_id = meta.at("algo").get<std::string>();
    tr.seed = meta.at("seed").get<std::uint64_t>();
    tr.schedule = {meta.at("alpha").get<double>(), meta.at("theta").get<double>()};
    tr.eps = meta.at("eps").get<double>();
    b.m = meta.at("m").get<std::int64_t>();
    b.f_star = meta.at("f_star").get<double>();
    b.B_analytic = optional_from(meta, "B_analytic");
    b.beta_analytic = optional_from(meta, "beta_analytic");
    b.x_ref = Point(meta.at("x_ref").get<std::vector<double>>());
  } catch (const ordered_json::exception& e) {
    throw ParseError("sidecar '" + path + ".json': " + e.what());
  } catch (const ContractError& e) {
    throw ParseError("sidecar '" + path + ".json': " + e.what());
  }

  const std::string ipath = path + ".iterates.csv";
  const std::string text = read_file(ipath);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(ipath + ": empty file");
  const auto header = split_commas(lines.front());
  constexpr std::size_t kFixed = 6;
  if (header.size() <= kFixed || header[0] != "t") throw ParseError(ipath + ": bad header");
  const std::size_t n = header.size() - kFixed;
  if (n != b.x_ref.dim()) throw ParseError(ipath + ": dimension differs from x_ref");
  RunTrace& tr = b.trace;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_commas(lines[r]);
    const std::string where = ipath + ":" + std::to_string(r + 1);
    if (cells.size() != header.size()) throw ParseError(where + ": wrong number of columns");
    if (parse_double(cells[0], where) != static_cast<double>(r)) {
      throw ParseError(where + ": t is not consecutive");
    }
    tr.f_values.push_back(parse_double(cells[1], where));
    tr.alpha_values.push_back(parse_double(cells[2], where));
    tr.eps_values.push_back(parse_double(cells[3], where));
    tr.subgrad_max_l.push_back(parse_double(cells[4], where));
    tr.subgrad_max_r.push_back(parse_double(cells[5], where));
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = parse_double(cells[kFixed + i], where);
    try {
      tr.iterates.emplace_back(std::move(x));
    } catch (const ContractError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (tr.iterates.empty()) throw ParseError(ipath + ": no rows");
  return b;
}

double effective_B(const TraceBundle& b, std::optional<double> B_override) {
  if (B_override) {
    if (!(*B_override >= 0.0) || !std::isfinite(*B_override)) {
      throw ConfigError("B must be finite and >= 0");
    }
    return *B_override;
  }
  if (b.B_analytic) return *b.B_analytic;
  return fejer::observed_B(b.trace);
}

fejer::CertificateConstants make_constants(const TraceBundle& b, std::string_view source,
                                           std::optional<double> B_override) {
  Provenance prov;
  if (source.empty() || source == "auto") {
    prov = default_provenance(b.trace.algo_id);
  } else {
    try {
      prov = fejer::provenance_from_string(source);
    } catch (const ConfigError&) {
      return constants_from_file(std::string(source));
    }
  }
  const auto& alphas = b.trace.alpha_values;
  switch (prov) {
    case Provenance::FbThm32:
      return fejer::fb_constants(alphas, effective_B(b, B_override), b.trace.eps);
    case Provenance::PsThm35:
      return fejer::ps_constants(alphas, effective_B(b, B_override), b.trace.eps);
    case Provenance::IncThm37:
      return fejer::inc_constants(alphas, b.m, effective_B(b, B_override));
    case Provenance::DrThm310:
      return fejer::dr_constants(alphas, effective_B(b, B_override));
    case Provenance::SmoothProp33:
      return fejer::smooth_constants(beta_of(b), b.trace.T());
    case Provenance::Custom:
      break;
  }
  throw ConfigError("custom constants must come from a JSON file");
}

fejer::FejerCertificate certify_bundle(const TraceBundle& b, std::string_view source,
                                       std::optional<double> B_override,
                                       const fejer::CertifyOptions& options) {
  const auto constants = make_constants(b, source, B_override);
  const std::vector<fejer::TestPoint> points{{"x_ref", b.x_ref, b.f_star}};
  auto cert = fejer::certify(b.trace, constants, points, options);
  const bool uses_B = constants.provenance == Provenance::FbThm32 ||
                      constants.provenance == Provenance::PsThm35 ||
                      constants.provenance == Provenance::IncThm37 ||
                      constants.provenance == Provenance::DrThm310;
  if (uses_B) {
    const double B = effective_B(b, B_override);
    cert.conditional = fejer::observed_B(b.trace) > B * (1.0 + 1e-12);
  }
  return cert;
}

std::string BoundsReport::csv() const {
  std::string out = "T,empirical_gap,bound,ratio\n";
  for (std::size_t k = 0; k < T.size(); ++k) {
    out += std::to_string(T[k]);
    for (double v : {gap[k], bound[k], gap[k] / bound[k]}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string BoundsReport::summary_json() const {
  ordered_json j;
  j["theorem"] = theorem;
  j["T_min"] = T.empty() ? 0 : T.front();
  j["T_max"] = T.empty() ? 0 : T.back();
  j["max_ratio"] = max_ratio;
  j["first_violation_T"] =
      first_violation_T ? ordered_json(*first_violation_T) : ordered_json(nullptr);
  return j.dump(2) + "\n";
}

BoundsReport bounds(const TraceBundle& b, std::string_view theorem,
                    std::optional<double> B_override) {
  const RunTrace& tr = b.trace;
  const std::int64_t T_end = tr.T();
  const double d_sq = b.d_sq();
  const double alpha = tr.schedule.alpha;
  const double theta = tr.schedule.theta;
  std::int64_t T_min = 4;
  std::function<double(std::int64_t)> bound;

  // Weights induced by the run itself, for the generic statements.
  fejer::CertificateConstants c;
  auto need_constants = [&] {
    c = make_constants(b, "auto", B_override);
    if (static_cast<std::int64_t>(c.eta.size()) < T_end) {
      throw ConfigError("certificate weights shorter than the trace");
    }
  };

  if (theorem == "thm22") {
    need_constants();
    T_min = 2;
    bound = [&](std::int64_t T) {
      return rates::bound_thm22(d_sq, std::span(c.eta).first(static_cast<std::size_t>(T)),
                                std::span(c.xi).first(static_cast<std::size_t>(T)));
    };
  } else if (theorem == "cor23") {
    need_constants();
    for (double v : c.xi) {
      if (v != 0.0) throw ConfigError("cor23 needs xi identically zero");
    }
    T_min = 2;
    bound = [&](std::int64_t T) {
      return rates::bound_cor23(d_sq, c.eta[static_cast<std::size_t>(T - 1)], T);
    };
  } else if (theorem == "thm24") {
    rates::PolySchedule ps{};
    const std::string& algo = tr.algo_id;
    if (algo == "fb-smooth") {
      ps = {2.0 / beta_of(b), 0.0, 0.0, 0.0};
    } else {
      const double B = effective_B(b, B_override);
      double coef = 0.0;
      if (algo == "fb" || algo == "psg") {
        coef = 10.0 * B * B + 2.0 * tr.eps;
      } else if (algo == "inc") {
        const double md = static_cast<double>(b.m);
        coef = (4.0 * md + 5.0) * md * B * B;
      } else if (algo == "dr") {
        coef = 16.0 * B * B;
      } else {
        throw ConfigError("thm24 has no schedule for algorithm '" + algo + "'");
      }
      ps = {2.0 * alpha, theta, coef * alpha * alpha, 2.0 * theta};
    }
    T_min = 3;
    bound = [ps, d_sq](std::int64_t T) { return rates::bound_thm24(d_sq, ps, T); };
  } else if (theorem == "thm32") {
    require_algo(b, "fb", theorem);
    const double B = effective_B(b, B_override);
    const double eps = tr.eps;
    bound = [=](std::int64_t T) { return rates::bound_thm32(d_sq, alpha, theta, B, eps, T); };
  } else if (theorem == "thm35") {
    require_algo(b, "psg", theorem);
    const double B = effective_B(b, B_override);
    const double eps = tr.eps;
    bound = [=](std::int64_t T) { return rates::bound_thm35(d_sq, alpha, theta, B, eps, T); };
  } else if (theorem == "thm37") {
    require_algo(b, "inc", theorem);
    const double B = effective_B(b, B_override);
    const std::int64_t m = b.m;
    bound = [=](std::int64_t T) { return rates::bound_thm37(d_sq, alpha, theta, B, m, T); };
  } else if (theorem == "thm310") {
    require_algo(b, "dr", theorem);
    const double B = effective_B(b, B_override);
    bound = [=](std::int64_t T) { return rates::bound_thm310(d_sq, alpha, theta, B, T); };
  } else if (theorem == "prop33") {
    require_algo(b, "fb-smooth", theorem);
    const double beta = beta_of(b);
    T_min = 2;
    bound = [=](std::int64_t T) { return rates::bound_prop33(d_sq, beta, T); };
  } else {
    throw ConfigError("unknown theorem '" + std::string(theorem) + "'");
  }
  if (T_end < T_min) {
    throw ConfigError(std::string(theorem) + " needs a trace with T >= " + std::to_string(T_min));
  }

  BoundsReport rep;
  rep.theorem = std::string(theorem);
  try {
    for (std::int64_t T = T_min; T <= T_end; ++T) {
      const double gap = tr.f_values[static_cast<std::size_t>(T - 1)] - b.f_star;
      const double bd = bound(T);
      rep.T.push_back(T);
      rep.gap.push_back(gap);
      rep.bound.push_back(bd);
      rep.max_ratio = std::max(rep.max_ratio, gap / bd);
      if (gap > bd && !rep.first_violation_T) rep.first_violation_T = T;
    }
  } catch (const ContractError& e) {
    throw ConfigError(std::string(theorem) + " does not apply to this trace: " + e.what());
  }
  return rep;
}

std::string SlopeReport::json() const {
  ordered_json j;
  j["status"] = converged ? "converged" : "ok";
  j["window_decades"] = window_decades;
  j["T_start"] = T_start;
  j["T_end"] = T_end;
  if (converged) {
    j["last_iterate_slope"] = nullptr;
    j["best_iterate_slope"] = nullptr;
    j["slope_difference"] = nullptr;
  } else {
    j["last_iterate_slope"] = last_iterate_slope;
    j["best_iterate_slope"] = best_iterate_slope;
    j["slope_difference"] = std::abs(last_iterate_slope - best_iterate_slope);
  }
  return j.dump(2) + "\n";
}

SlopeReport slope(const TraceBundle& b, double window_decades) {
  const RunTrace& tr = b.trace;
  const std::int64_t T_end = tr.T();
  if (T_end < 1000) throw ContractError("slope needs a trace with T >= 1000");
  if (!(window_decades > 0.0)) throw ContractError("slope window must be > 0 decades");
  SlopeReport rep;
  rep.window_decades = window_decades;
  rep.T_end = T_end;
  rep.T_start = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(static_cast<double>(T_end) /
                                             std::pow(10.0, window_decades))));
  if (T_end - rep.T_start < 2) throw ContractError("slope window holds fewer than three points");

  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t T = 1; T < rep.T_start; ++T) {
    best = std::min(best, tr.f_values[static_cast<std::size_t>(T - 1)]);
  }
  std::vector<double> lx, ly_last, ly_best;
  for (std::int64_t T = rep.T_start; T <= T_end; ++T) {
    const double f = tr.f_values[static_cast<std::size_t>(T - 1)];
    best = std::min(best, f);
    const double gap = f - b.f_star;
    const double best_gap = best - b.f_star;
    if (!(gap > 0.0) || !(best_gap > 0.0)) {
      rep.converged = true;
      return rep;
    }
    lx.push_back(std::log(static_cast<double>(T)));
    ly_last.push_back(std::log(gap));
    ly_best.push_back(std::log(best_gap));
  }
  rep.last_iterate_slope = least_squares_slope(lx, ly_last);
  rep.best_iterate_slope = least_squares_slope(lx, ly_best);
  return rep;
}

}  // namespace splitcert::report
