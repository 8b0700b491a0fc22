#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "splitcert/splitcert.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitOracle = 3;

struct TraceDeleter {
  void operator()(sc_trace* t) const { sc_trace_destroy(t); }
};
using TracePtr = std::unique_ptr<sc_trace, TraceDeleter>;

struct CString {
  char* p = nullptr;
  ~CString() { sc_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

int report(sc_status s) {
  std::cerr << "splitcert: " << sc_last_error() << "\n";
  switch (s) {
    case SC_ERR_DOMAIN:
    case SC_ERR_CONTRACT:
      return kExitOracle;
    default:
      return kExitConfig;
  }
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "splitcert: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return static_cast<bool>(out.flush());
}

// Emits to path when given, else stdout.
int emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return kExitOk;
  }
  return write_text(path, text) ? kExitOk : kExitConfig;
}

struct RunSettings {
  std::string problem;
  std::string algo;
  double alpha = 0.1;
  double theta = 0.5;
  double eps = 0.0;
  std::int64_t T = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

void apply_json(RunSettings& s, const json& j) {
  if (!j.is_object()) throw std::runtime_error("run config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    static const char* known[] = {"problem", "algo", "alpha", "theta", "eps", "T", "seed", "out"};
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return key == k; }) == std::end(known)) {
      throw std::runtime_error("unknown config key '" + key + "'");
    }
  }
  s.problem = j.value("problem", s.problem);
  s.algo = j.value("algo", s.algo);
  s.alpha = j.value("alpha", s.alpha);
  s.theta = j.value("theta", s.theta);
  s.eps = j.value("eps", s.eps);
  s.T = j.value("T", s.T);
  s.seed = j.value("seed", s.seed);
  s.out = j.value("out", s.out);
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return json::parse(in);
}

int do_run(const RunSettings& s) {
  if (s.out.empty()) {
    std::cerr << "splitcert: --out is required\n";
    return kExitConfig;
  }
  sc_run_config c;
  sc_run_config_init(&c);
  c.problem_id = s.problem.empty() ? nullptr : s.problem.c_str();
  c.algo = s.algo.empty() ? nullptr : s.algo.c_str();
  c.alpha = s.alpha;
  c.theta = s.theta;
  c.eps = s.eps;
  c.T = s.T;
  c.seed = s.seed;
  sc_trace* raw = nullptr;
  if (sc_status st = sc_run(&c, &raw); st != SC_OK) return report(st);
  TracePtr trace(raw);
  if (sc_status st = sc_trace_write(trace.get(), s.out.c_str()); st != SC_OK) return report(st);
  return kExitOk;
}

std::optional<TracePtr> load_trace(const std::string& path, int& code) {
  sc_trace* raw = nullptr;
  if (sc_status st = sc_trace_read(path.c_str(), &raw); st != SC_OK) {
    report(st);
    code = kExitConfig;
    return std::nullopt;
  }
  return TracePtr(raw);
}

sc_iterate_points iterate_policy(const std::string& name) {
  if (name == "all") return SC_ITERATES_ALL;
  if (name == "geometric") return SC_ITERATES_GEOMETRIC;
  if (name == "none") return SC_ITERATES_NONE;
  return SC_ITERATES_AUTO;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fejér certificates and rate envelopes for first-order splitting methods"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sc_version()));

  // run
  RunSettings flags;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Execute one algorithm on a catalog problem");
  run->add_option("--config", config_path, "JSON file with run settings")->check(CLI::ExistingFile);
  auto* o_problem = run->add_option("--problem", flags.problem, "Problem id");
  auto* o_algo = run->add_option("--algo", flags.algo, "fb, fb-smooth, psg, inc or dr");
  auto* o_alpha = run->add_option("--alpha", flags.alpha, "Step scale alpha");
  auto* o_theta = run->add_option("--theta", flags.theta, "Step decay exponent theta");
  auto* o_eps = run->add_option("--eps", flags.eps, "epsilon-subgradient budget scale");
  auto* o_T = run->add_option("--T", flags.T, "Number of iterates");
  auto* o_seed = run->add_option("--seed", flags.seed, "RNG seed");
  auto* o_out = run->add_option("--out", flags.out, "Trace CSV path");

  // certify
  std::string trace_path, out_path, constants = "auto", iterates = "auto";
  double B = std::numeric_limits<double>::quiet_NaN();
  double tol = 1e-9;
  auto* certify = app.add_subcommand("certify", "Check the modified Fejér inequality on a trace");
  certify->add_option("trace", trace_path, "Trace CSV written by run")->required();
  certify->add_option("--constants", constants, "auto, a provenance name, or a JSON file");
  certify->add_option("--B", B, "Subgradient bound (default: analytic, else observed)");
  certify->add_option("--tol", tol, "Relative slack tolerance");
  certify->add_option("--iterates", iterates, "Iterate test points")
      ->check(CLI::IsMember({"auto", "all", "geometric", "none"}));
  certify->add_option("--out", out_path, "Certificate JSON path (default stdout)");

  // bounds
  std::string theorem, summary_path;
  auto* bounds = app.add_subcommand("bounds", "Compare a trace with a rate bound");
  bounds->add_option("trace", trace_path, "Trace CSV written by run")->required();
  bounds->add_option("--theorem", theorem, "thm22, cor23, thm24, thm32, thm35, thm37, thm310, prop33")
      ->required();
  bounds->add_option("--B", B, "Subgradient bound (default: analytic, else observed)");
  bounds->add_option("--out", out_path, "Per-T comparison CSV path");
  bounds->add_option("--summary", summary_path, "Summary JSON path (default stdout)");

  // slope
  double window = 1.0;
  auto* slope = app.add_subcommand("slope", "Fit the log-log slope of the gap curve");
  slope->add_option("trace", trace_path, "Trace CSV written by run")->required();
  slope->add_option("--window", window, "Trailing window in decades of T");
  slope->add_option("--out", out_path, "Slope JSON path (default stdout)");

  // sweep
  std::string sweep_path;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Execute the runs listed in a JSON file concurrently");
  sweep->add_option("config", sweep_path, "JSON {\"runs\": [...]} file")->required();
  sweep->add_option("--threads", threads, "Worker threads (default: hardware concurrency)");

  // catalog
  std::string problem_id;
  auto* catalog = app.add_subcommand("catalog", "Print problem descriptors");
  catalog->add_option("--problem", problem_id, "Print one problem only");
  catalog->add_option("--out", out_path, "JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) {
    RunSettings s;
    if (!config_path.empty()) {
      try {
        apply_json(s, load_json(config_path));
      } catch (const std::exception& e) {
        std::cerr << "splitcert: " << e.what() << "\n";
        return kExitConfig;
      }
    }
    if (o_problem->count()) s.problem = flags.problem;
    if (o_algo->count()) s.algo = flags.algo;
    if (o_alpha->count()) s.alpha = flags.alpha;
    if (o_theta->count()) s.theta = flags.theta;
    if (o_eps->count()) s.eps = flags.eps;
    if (o_T->count()) s.T = flags.T;
    if (o_seed->count()) s.seed = flags.seed;
    if (o_out->count()) s.out = flags.out;
    return do_run(s);
  }

  if (*certify) {
    int code = kExitOk;
    auto trace = load_trace(trace_path, code);
    if (!trace) return code;
    int passed = 0;
    CString js;
    const sc_status st = sc_certify(trace->get(), constants.c_str(), B, tol,
                                    iterate_policy(iterates), &passed, &js.p);
    if (st != SC_OK) {
      report(st);
      return kExitConfig;
    }
    if (emit(out_path, js.str()) != kExitOk) return kExitConfig;
    return passed ? kExitOk : kExitFail;
  }

  if (*bounds) {
    int code = kExitOk;
    auto trace = load_trace(trace_path, code);
    if (!trace) return code;
    int violated = 0;
    CString csv, summary;
    const sc_status st = sc_bounds(trace->get(), theorem.c_str(), B, &violated,
                                   out_path.empty() ? nullptr : &csv.p, &summary.p);
    if (st != SC_OK) {
      report(st);
      return kExitConfig;
    }
    if (!out_path.empty() && !write_text(out_path, csv.str())) return kExitConfig;
    if (emit(summary_path, summary.str()) != kExitOk) return kExitConfig;
    return violated ? kExitFail : kExitOk;
  }

  if (*slope) {
    int code = kExitOk;
    auto trace = load_trace(trace_path, code);
    if (!trace) return code;
    CString js;
    if (sc_status st = sc_slope(trace->get(), window, &js.p); st != SC_OK) {
      report(st);
      return kExitConfig;
    }
    return emit(out_path, js.str());
  }

  if (*sweep) {
    std::vector<RunSettings> runs;
    try {
      const json j = load_json(sweep_path);
      RunSettings defaults;
      if (j.contains("defaults")) apply_json(defaults, j.at("defaults"));
      for (const auto& r : j.at("runs")) {
        RunSettings s = defaults;
        apply_json(s, r);
        runs.push_back(std::move(s));
      }
    } catch (const std::exception& e) {
      std::cerr << "splitcert: " << e.what() << "\n";
      return kExitConfig;
    }
    for (std::size_t i = 0; i < runs.size(); ++i) {
      for (std::size_t k = 0; k < i; ++k) {
        if (!runs[i].out.empty() && runs[i].out == runs[k].out) {
          std::cerr << "splitcert: runs " << k << " and " << i << " share output '"
                    << runs[i].out << "'\n";
          return kExitConfig;
        }
      }
    }
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(runs.size(), 1)));
    std::vector<int> codes(runs.size(), kExitOk);
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
      for (std::size_t i = next++; i < runs.size(); i = next++) {
        const int c = do_run(runs[i]);
        codes[i] = c;
        std::lock_guard lock(log_mutex);
        std::cerr << "run " << i << " (" << runs[i].problem << ", " << runs[i].algo
                  << ") exit " << c << "\n";
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    int worst = kExitOk;
    for (int c : codes) worst = std::max(worst, c);
    return worst;
  }

  if (*catalog) {
    CString js;
    const sc_status st = problem_id.empty() ? sc_catalog_json(&js.p)
                                            : sc_problem_json(problem_id.c_str(), &js.p);
    if (st != SC_OK) {
      report(st);
      return kExitConfig;
    }
    return emit(out_path, js.str());
  }
  return kExitConfig;
}
