#include <doctest.h>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "splitcert/errors.hpp"
#include "splitcert/report.hpp"

using namespace splitcert;
using namespace splitcert::report;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "splitcert_report_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig config(std::string problem, std::string algo, std::int64_t T) {
  RunConfig c;
  c.problem_id = std::move(problem);
  c.algo = std::move(algo);
  c.alpha = 0.5;
  c.theta = 0.5;
  c.T = T;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(validate(config("lasso_small", "fb", 10)));
  CHECK_THROWS_AS(validate(config("nope", "fb", 10)), ConfigError);
  CHECK_THROWS_AS(validate(config("lasso_small", "sgd", 10)), ConfigError);
  CHECK_THROWS_AS(validate(config("box_l1", "dr", 10)), ConfigError);
  CHECK_THROWS_AS(validate(config("lasso_small", "psg", 10)), ConfigError);
  CHECK_THROWS_AS(validate(config("hinge_m3", "fb", 10)), ConfigError);
  CHECK_THROWS_AS(validate(config("lasso_small", "fb", 1)), ConfigError);
  auto c = config("lasso_small", "dr", 10);
  c.eps = 0.1;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = config("lasso_small", "fb", 10);
  c.theta = 1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.theta = 0.5;
  c.alpha = -1;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-1.0 / 3.0) == "-0.33333333333333331");
  CHECK(format_double(2.5e-300) == "2.5e-300");
  CHECK(format_double(1.0 / 0.0) == "inf");
}

TEST_CASE("number formatting ignores the C locale") {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
    CHECK(format_double(0.5) == "0.5");
  }
  std::setlocale(LC_NUMERIC, saved.c_str());
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("trace csv layout") {
  const auto b = execute(config("lasso_small", "fb", 25));
  const std::string csv = trace_csv(b);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,f_gap,alpha_t,eps_t,dist_sq_to_ref,max_subgrad_norm_so_far");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
  CHECK(rows == 25);
  CHECK(csv.find("\n1,") != std::string::npos);
}

TEST_CASE("trace files round trip exactly") {
  for (const char* algo : {"fb", "fb-smooth", "dr", "inc"}) {
    CAPTURE(algo);
    auto c = config("lasso_small", algo, 40);
    if (std::string(algo) == "fb") c.eps = 1e-2;
    const auto b = execute(c);
    const auto path = scratch(std::string("rt_") + algo + ".csv").string();
    write_trace(b, path);
    const auto r = read_trace(path);
    CHECK(r.trace.iterates == b.trace.iterates);
    CHECK(r.trace.f_values == b.trace.f_values);
    CHECK(r.trace.alpha_values == b.trace.alpha_values);
    CHECK(r.trace.eps_values == b.trace.eps_values);
    CHECK(r.trace.subgrad_max_l == b.trace.subgrad_max_l);
    CHECK(r.trace.subgrad_max_r == b.trace.subgrad_max_r);
    CHECK(r.trace.algo_id == b.trace.algo_id);
    CHECK(r.trace.schedule.alpha == b.trace.schedule.alpha);
    CHECK(r.f_star == b.f_star);
    CHECK(r.x_ref == b.x_ref);
    CHECK(r.beta_analytic == b.beta_analytic);
    CHECK(trace_csv(r) == trace_csv(b));
  }
}

TEST_CASE("reading broken traces") {
  CHECK_THROWS_AS(read_trace(scratch("missing.csv").string()), ParseError);
  const auto b = execute(config("quad_abs_1d", "fb", 5));
  const auto path = scratch("broken.csv").string();
  write_trace(b, path);
  {
    std::ofstream(path + ".iterates.csv") << "t,f,alpha_t,eps_t,subgrad_max_l,subgrad_max_r,x1\n1,abc,1,0,0,0,0\n";
  }
  CHECK_THROWS_AS(read_trace(path), ParseError);
  {
    std::ofstream(path + ".iterates.csv") << "t,f,alpha_t,eps_t,subgrad_max_l,subgrad_max_r,x1\n2,1,1,0,0,0,0\n";
  }
  CHECK_THROWS_AS(read_trace(path), ParseError);
  { std::ofstream(path + ".json") << "{not json"; }
  CHECK_THROWS_AS(read_trace(path), ParseError);
}

TEST_CASE("reruns are byte identical") {
  auto c = config("lasso_small", "fb", 200);
  c.eps = 1e-3;
  const auto p1 = scratch("det1.csv").string(), p2 = scratch("det2.csv").string();
  write_trace(execute(c), p1);
  write_trace(execute(c), p2);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1 + ".json") == slurp(p2 + ".json"));
  CHECK(slurp(p1 + ".iterates.csv") == slurp(p2 + ".iterates.csv"));
}

TEST_CASE("default certificates pass") {
  struct Case {
    const char* problem;
    const char* algo;
    const char* provenance;
  };
  for (const auto& k : {Case{"lasso_small", "fb", "FB_thm32"}, Case{"lasso_small", "fb-smooth", "SMOOTH_prop33"},
                        Case{"lasso_small", "dr", "DR_thm310"}, Case{"hinge_m3", "inc", "INC_thm37"},
                        Case{"box_l1", "psg", "PS_thm35"}, Case{"abs_box_1d", "psg", "PS_thm35"},
                        Case{"two_quad_1d", "inc", "INC_thm37"}}) {
    CAPTURE(k.problem);
    CAPTURE(k.algo);
    auto c = config(k.problem, k.algo, 300);
    c.alpha = 0.05;
    const auto b = execute(c);
    const auto cert = certify_bundle(b, "auto", std::nullopt);
    CHECK(cert.pass);
    CHECK(fejer::to_string(cert.provenance) == k.provenance);
    CHECK_FALSE(cert.conditional);
  }
}

TEST_CASE("B override and the conditional flag") {
  const auto b = execute(config("lasso_small", "fb", 100));
  CHECK(effective_B(b, 2.0) == 2.0);
  CHECK(effective_B(b, std::nullopt) == fejer::observed_B(b.trace));
  const auto cert = certify_bundle(b, "auto", 1e-3);
  CHECK(cert.conditional);
  CHECK_THROWS_AS(effective_B(b, -1.0), ConfigError);
}

TEST_CASE("constants from a file") {
  const auto b = execute(config("quad_abs_1d", "fb", 3));
  const auto path = scratch("constants.json");
  std::ofstream(path) << R"({"eta": [0, 0], "xi": [-100, -100]})";
  const auto cert = certify_bundle(b, path.string(), std::nullopt);
  CHECK_FALSE(cert.pass);
  CHECK(cert.provenance == fejer::Provenance::Custom);
  CHECK_THROWS_AS(certify_bundle(b, scratch("absent.json").string(), std::nullopt), ParseError);
}

TEST_CASE("bounds applicability") {
  const auto fb = execute(config("lasso_small", "fb", 50));
  CHECK_THROWS_AS(bounds(fb, "cor23", std::nullopt), ConfigError);
  CHECK_THROWS_AS(bounds(fb, "thm310", std::nullopt), ConfigError);
  CHECK_THROWS_AS(bounds(fb, "prop33", std::nullopt), ConfigError);
  CHECK_THROWS_AS(bounds(fb, "thm99", std::nullopt), ConfigError);
  CHECK_FALSE(bounds(fb, "thm32", std::nullopt).first_violation_T.has_value());
  CHECK_FALSE(bounds(fb, "thm22", std::nullopt).first_violation_T.has_value());
  CHECK_FALSE(bounds(fb, "thm24", std::nullopt).first_violation_T.has_value());
  auto c = config("lasso_small", "fb", 50);
  c.theta = 0.0;
  CHECK_THROWS_AS(bounds(execute(c), "thm32", std::nullopt), ConfigError);
}

TEST_CASE("smooth bounds") {
  const auto sm = execute(config("lasso_small", "fb-smooth", 300));
  const auto rep = bounds(sm, "prop33", std::nullopt);
  CHECK(rep.T.front() == 2);
  CHECK(rep.max_ratio <= 1.0);
  const auto cor = bounds(sm, "cor23", std::nullopt);
  for (std::size_t k = 0; k < rep.bound.size(); ++k) {
    CHECK(cor.bound[k] == doctest::Approx(rep.bound[k]).epsilon(1e-14));
  }
}

TEST_CASE("bounds report formats") {
  const auto b = execute(config("lasso_small", "fb", 10));
  const auto rep = bounds(b, "thm32", std::nullopt);
  CHECK(rep.T.front() == 4);
  CHECK(rep.T.back() == 10);
  const std::string csv = rep.csv();
  CHECK(csv.rfind("T,empirical_gap,bound,ratio\n", 0) == 0);
  const auto j = nlohmann::json::parse(rep.summary_json());
  CHECK(j.at("first_violation_T").is_null());
  CHECK(j.at("max_ratio").get<double>() == rep.max_ratio);
}

TEST_CASE("slope") {
  auto c = config("lasso_small", "fb", 2000);
  c.eps = 1e-3;
  const auto s = slope(execute(c), 1.0);
  CHECK_FALSE(s.converged);
  CHECK(s.T_start == 200);
  CHECK(s.last_iterate_slope < -0.3);
  CHECK_THROWS_AS(slope(execute(config("lasso_small", "fb", 999)), 1.0), ContractError);
  CHECK_THROWS_AS(slope(execute(config("lasso_small", "fb", 1000)), 0.0), ContractError);
}

TEST_CASE("slope at the minimizer reports convergence") {
  auto b = execute(config("quad_abs_1d", "fb", 1000));
  for (auto& f : b.trace.f_values) f = b.f_star;
  const auto s = slope(b, 1.0);
  CHECK(s.converged);
  CHECK(nlohmann::json::parse(s.json()).at("status") == "converged");
}

namespace {

std::vector<std::string> keys(const std::string& text) {
  std::vector<std::string> out;
  const auto j = nlohmann::ordered_json::parse(text);
  for (const auto& [k, v] : j.items()) out.push_back(k);
  return out;
}

using Keys = std::vector<std::string>;

}  // namespace

TEST_CASE("json schemas are stable") {
  auto c = config("lasso_small", "dr", 1000);
  const auto b = execute(c);
  CHECK(keys(sidecar_json(b)) ==
        Keys{"format", "version", "problem_id", "algo", "seed", "alpha", "theta", "eps", "T", "m",
             "dim", "f_star", "d_sq", "B_analytic", "beta_analytic", "observed_B", "x_ref",
             "f_at_z_last", "f_at_z_best"});
  CHECK(keys(fejer::to_json(certify_bundle(b, "auto", std::nullopt))) ==
        Keys{"verdict", "min_slack", "min_rel_slack", "argmin", "eq3_min_slack", "eq3_argmin_t",
             "constants_provenance", "value_lag", "tol_rel", "test_points", "conditional"});
  CHECK(keys(bounds(b, "thm310", std::nullopt).summary_json()) ==
        Keys{"theorem", "T_min", "T_max", "max_ratio", "first_violation_T"});
  CHECK(keys(slope(b, 1.0).json()) ==
        Keys{"status", "window_decades", "T_start", "T_end", "last_iterate_slope",
             "best_iterate_slope", "slope_difference"});
  const std::string iter = iterates_csv(b);
  CHECK(iter.substr(0, iter.find('\n')).rfind("t,f,alpha_t,eps_t,subgrad_max_l,subgrad_max_r,x1,x2,", 0) == 0);
}
