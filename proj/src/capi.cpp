#include "splitcert/splitcert.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include <json.hpp>

#include "splitcert/errors.hpp"
#include "splitcert/problems.hpp"
#include "splitcert/report.hpp"

struct sc_trace {
  splitcert::report::TraceBundle bundle;
};

namespace {

thread_local std::string last_error;

sc_status fail(sc_status code, const char* what) {
  last_error = what;
  return code;
}

template <class F>
sc_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SC_OK;
  } catch (const splitcert::ConfigError& e) {
    return fail(SC_ERR_CONFIG, e.what());
  } catch (const splitcert::DomainError& e) {
    return fail(SC_ERR_DOMAIN, e.what());
  } catch (const splitcert::ContractError& e) {
    return fail(SC_ERR_CONTRACT, e.what());
  } catch (const splitcert::ParseError& e) {
    return fail(SC_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SC_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::optional<double> B_arg(double B) {
  if (std::isnan(B) || B <= 0.0) return std::nullopt;
  return B;
}

}  // namespace

extern "C" {

SC_API void sc_run_config_init(sc_run_config* c) {
  if (!c) return;
  c->problem_id = nullptr;
  c->algo = nullptr;
  c->alpha = 0.1;
  c->theta = 0.5;
  c->eps = 0.0;
  c->T = 1000;
  c->seed = 0;
}

SC_API const char* sc_last_error(void) { return last_error.c_str(); }

SC_API const char* sc_version(void) { return "0.1.0"; }

SC_API void sc_string_free(char* s) { std::free(s); }

SC_API sc_status sc_catalog_json(char** out) {
  if (!out) return fail(SC_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : splitcert::problems::catalog()) {
      arr.push_back(nlohmann::ordered_json::parse(p.descriptor_json()));
    }
    nlohmann::ordered_json j;
    j["problems"] = std::move(arr);
    j["rejected"] = splitcert::problems::rejected();
    *out = dup(j.dump(2) + "\n");
  });
}

SC_API sc_status sc_problem_json(const char* problem_id, char** out) {
  if (!problem_id || !out) return fail(SC_ERR_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] {
    const auto& p = splitcert::problems::find_problem(problem_id);
    *out = dup(nlohmann::ordered_json::parse(p.descriptor_json()).dump(2) + "\n");
  });
}

SC_API sc_status sc_run(const sc_run_config* config, sc_trace** out) {
  if (!config || !out) return fail(SC_ERR_INVALID_ARGUMENT, "NULL argument");
  if (!config->problem_id || !config->algo) {
    return fail(SC_ERR_CONFIG, "problem_id and algo are required");
  }
  *out = nullptr;
  return guarded([&] {
    splitcert::report::RunConfig rc;
    rc.problem_id = config->problem_id;
    rc.algo = config->algo;
    rc.alpha = config->alpha;
    rc.theta = config->theta;
    rc.eps = config->eps;
    rc.T = config->T;
    rc.seed = config->seed;
    *out = new sc_trace{splitcert::report::execute(rc)};
  });
}

SC_API void sc_trace_destroy(sc_trace* trace) { delete trace; }

SC_API int64_t sc_trace_length(const sc_trace* trace) {
  return trace ? trace->bundle.trace.T() : 0;
}

SC_API const char* sc_trace_algo(const sc_trace* trace) {
  return trace ? trace->bundle.trace.algo_id.c_str() : "";
}

SC_API sc_status sc_trace_write(const sc_trace* trace, const char* path) {
  if (!trace || !path) return fail(SC_ERR_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] { splitcert::report::write_trace(trace->bundle, path); });
}

SC_API sc_status sc_trace_read(const char* path, sc_trace** out) {
  if (!path || !out) return fail(SC_ERR_INVALID_ARGUMENT, "NULL argument");
  *out = nullptr;
  return guarded([&] { *out = new sc_trace{splitcert::report::read_trace(path)}; });
}

SC_API sc_status sc_trace_csv(const sc_trace* trace, char** out) {
  if (!trace || !out) return fail(SC_ERR_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] { *out = dup(splitcert::report::trace_csv(trace->bundle)); });
}

SC_API sc_status sc_certify(const sc_trace* trace, const char* constants_source, double B,
                            double tol_rel, sc_iterate_points iterates, int* passed,
                            char** json_out) {
  if (!trace || !passed || !json_out) return fail(SC_ERR_INVALID_ARGUMENT, "NULL argument");
  using splitcert::fejer::IterateTestPoints;
  IterateTestPoints policy;
  switch (iterates) {
    case SC_ITERATES_AUTO: policy = IterateTestPoints::Auto; break;
    case SC_ITERATES_ALL: policy = IterateTestPoints::All; break;
    case SC_ITERATES_GEOMETRIC: policy = IterateTestPoints::Geometric; break;
    case SC_ITERATES_NONE: policy = IterateTestPoints::None; break;
    default: return fail(SC_ERR_INVALID_ARGUMENT, "unknown iterate policy");
  }
  return guarded([&] {
    splitcert::fejer::CertifyOptions opt;
    opt.iterates = policy;
    if (tol_rel > 0.0) opt.tol_rel = tol_rel;
    const auto cert = splitcert::report::certify_bundle(
        trace->bundle, constants_source ? constants_source : "auto", B_arg(B), opt);
    *passed = cert.pass ? 1 : 0;
    *json_out = dup(splitcert::fejer::to_json(cert) + "\n");
  });
}

SC_API sc_status sc_bounds(const sc_trace* trace, const char* theorem, double B, int* violated,
                           char** csv_out, char** summary_out) {
  if (!trace || !theorem || !violated || !summary_out) {
    return fail(SC_ERR_INVALID_ARGUMENT, "NULL argument");
  }
  return guarded([&] {
    const auto rep = splitcert::report::bounds(trace->bundle, theorem, B_arg(B));
    *violated = rep.first_violation_T ? 1 : 0;
    char* summary = dup(rep.summary_json());
    if (csv_out) {
      try {
        *csv_out = dup(rep.csv());
      } catch (...) {
        std::free(summary);
        throw;
      }
    }
    *summary_out = summary;
  });
}

SC_API sc_status sc_slope(const sc_trace* trace, double window_decades, char** json_out) {
  if (!trace || !json_out) return fail(SC_ERR_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] {
    *json_out = dup(splitcert::report::slope(trace->bundle, window_decades).json());
  });
}

}  // extern "C"
