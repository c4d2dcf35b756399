#include "tensorsplit/ts.h"

#include <cstring>
#include <memory>
#include <string>

#include "tensorsplit/config_json.hpp"
#include "tensorsplit/decomposition.hpp"
#include "tensorsplit/field_io.hpp"
#include "tensorsplit/report.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
ts_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const tsplit::IndefiniteMetricError& e) {
    set_error(e.what());
    return TS_ERR_INDEFINITE_METRIC;
  } catch (const tsplit::InconsistentRhsError& e) {
    set_error(e.what());
    return TS_ERR_INCONSISTENT_RHS;
  } catch (const nlohmann::json::exception& e) {
    set_error(e.what());
    return TS_ERR_PARSE;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    const std::string w = e.what();
    if (w.find("grid mismatch") != std::string::npos) return TS_ERR_GRID_MISMATCH;
    if (w.find("kind mismatch") != std::string::npos) return TS_ERR_KIND_MISMATCH;
    return TS_ERR_INVALID_ARG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return TS_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct ts_grid {
  tsplit::Grid g;
};
struct ts_metric {
  tsplit::Grid grid;
  std::shared_ptr<tsplit::MetricField> m;
};
struct ts_field {
  tsplit::Field f;
};
struct ts_decomposition {
  std::string kind;  // "berger_ebin" | "york"
  std::shared_ptr<tsplit::BergerEbinResult> be;
  std::shared_ptr<tsplit::YorkResult> yk;
};

extern "C" {

const char* ts_version(void) { return "0.1.0"; }

const char* ts_last_error_message(void) { return g_last_error.c_str(); }

void ts_string_free(char* s) { std::free(s); }

ts_status ts_grid_create(int32_t n, const int32_t* dims, const double* lengths, ts_grid** out) {
  return guarded([&]() -> ts_status {
    if (!dims || !lengths || !out) {
      set_error("null argument");
      return TS_ERR_INVALID_ARG;
    }
    std::vector<int> d(dims, dims + n);
    std::vector<double> l(lengths, lengths + n);
    auto* h = new ts_grid{tsplit::make_grid(n, d, l)};
    *out = h;
    return TS_OK;
  });
}

void ts_grid_destroy(ts_grid* g) { delete g; }

ts_status ts_grid_dim(const ts_grid* g, int32_t* n_out) {
  if (!g || !n_out) {
    set_error("null argument");
    return TS_ERR_INVALID_ARG;
  }
  *n_out = g->g.n;
  return TS_OK;
}

ts_status ts_grid_points(const ts_grid* g, uint64_t* points_out) {
  if (!g || !points_out) {
    set_error("null argument");
    return TS_ERR_INVALID_ARG;
  }
  *points_out = g->g.points;
  return TS_OK;
}

ts_status ts_metric_create(const ts_grid* g, const char* spec_json, ts_metric** out) {
  return guarded([&]() -> ts_status {
    if (!g || !spec_json || !out) {
      set_error("null argument");
      return TS_ERR_INVALID_ARG;
    }
    nlohmann::json j = nlohmann::json::parse(spec_json);
    tsplit::MetricSpec spec = tsplit::metric_spec_from_json(j, g->g.n);
    auto m = std::make_shared<tsplit::MetricField>(tsplit::sample_metric(spec, g->g));
    *out = new ts_metric{g->g, std::move(m)};
    return TS_OK;
  });
}

void ts_metric_destroy(ts_metric* m) { delete m; }

ts_status ts_field_create(const ts_grid* g, const char* kind, const double* data, size_t len,
                          ts_field** out) {
  return guarded([&]() -> ts_status {
    if (!g || !kind || !out) {
      set_error("null argument");
      return TS_ERR_INVALID_ARG;
    }
    tsplit::Field f(g->g, tsplit::kind_from_name(kind));
    if (data) {
      if (len != f.raw().size()) {
        set_error("data length mismatch");
        return TS_ERR_INVALID_ARG;
      }
      std::copy(data, data + len, f.raw().begin());
    }
    *out = new ts_field{std::move(f)};
    return TS_OK;
  });
}

void ts_field_destroy(ts_field* f) { delete f; }

ts_status ts_field_kind(const ts_field* f, const char** kind_out) {
  if (!f || !kind_out) {
    set_error("null argument");
    return TS_ERR_INVALID_ARG;
  }
  *kind_out = tsplit::kind_name(f->f.kind());
  return TS_OK;
}

ts_status ts_field_size(const ts_field* f, size_t* len_out) {
  if (!f || !len_out) {
    set_error("null argument");
    return TS_ERR_INVALID_ARG;
  }
  *len_out = f->f.raw().size();
  return TS_OK;
}

ts_status ts_field_copy_data(const ts_field* f, double* out, size_t len) {
  if (!f || !out) {
    set_error("null argument");
    return TS_ERR_INVALID_ARG;
  }
  if (len != f->f.raw().size()) {
    set_error("data length mismatch");
    return TS_ERR_INVALID_ARG;
  }
  std::copy(f->f.raw().begin(), f->f.raw().end(), out);
  return TS_OK;
}

ts_status ts_field_read(const char* path, ts_field** out) {
  return guarded([&]() -> ts_status {
    if (!path || !out) {
      set_error("null argument");
      return TS_ERR_INVALID_ARG;
    }
    try {
      *out = new ts_field{tsplit::read_field(path)};
    } catch (const std::runtime_error& e) {
      set_error(e.what());
      return TS_ERR_IO;
    }
    return TS_OK;
  });
}

ts_status ts_field_write(const ts_field* f, const char* path) {
  return guarded([&]() -> ts_status {
    if (!f || !path) {
      set_error("null argument");
      return TS_ERR_INVALID_ARG;
    }
    try {
      tsplit::write_field(f->f, path);
    } catch (const std::runtime_error& e) {
      set_error(e.what());
      return TS_ERR_IO;
    }
    return TS_OK;
  });
}

ts_status ts_l2_inner(const ts_field* a, const ts_field* b, const ts_metric* m, double* out) {
  return guarded([&]() -> ts_status {
    if (!a || !b || !m || !out) {
      set_error("null argument");
      return TS_ERR_INVALID_ARG;
    }
    if (a->f.kind() != b->f.kind()) {
      set_error("field kind mismatch");
      return TS_ERR_KIND_MISMATCH;
    }
    if (!(a->f.grid() == b->f.grid()) || !(a->f.grid() == m->grid)) {
      set_error("grid mismatch");
      return TS_ERR_GRID_MISMATCH;
    }
    *out = tsplit::l2_inner(a->f, b->f, *m->m);
    return TS_OK;
  });
}

namespace {

struct DecompOptions {
  tsplit::SolveOptions sopts;
  tsplit::KernelOptions kopts;
  int order = 4;
};

DecompOptions parse_options(const char* options_json) {
  DecompOptions o;
  if (!options_json || !*options_json) return o;
  nlohmann::json j = nlohmann::json::parse(options_json);
  o.order = j.value("order", 4);
  if (j.contains("solve")) {
    const auto& js = j.at("solve");
    o.sopts.rel_tol = js.value("rel_tol", 1e-10);
    o.sopts.max_iter = js.value("max_iter", 0);
    o.sopts.deflate_kernel = js.value("deflate_kernel", true);
  }
  if (j.contains("kernel")) {
    const auto& jk = j.at("kernel");
    o.kopts.max_dim = jk.value("max_dim", 0);
    o.kopts.eig_tol = jk.value("eig_tol", 1e-8);
    o.kopts.probes = jk.value("probes", 0);
  }
  o.kopts.seed = j.value("seed", (std::uint64_t)0);
  return o;
}

ts_status decompose_impl(const ts_metric* m, const ts_field* phi, const char* options_json,
                         bool do_york, ts_decomposition** out) {
  if (!m || !phi || !out) {
    set_error("null argument");
    return TS_ERR_INVALID_ARG;
  }
  if (phi->f.kind() != tsplit::FieldKind::sym_tensor) {
    set_error("field kind mismatch: decomposition input must be a symtensor");
    return TS_ERR_KIND_MISMATCH;
  }
  if (!(phi->f.grid() == m->grid)) {
    set_error("grid mismatch");
    return TS_ERR_GRID_MISMATCH;
  }
  DecompOptions o = parse_options(options_json);
  tsplit::Geometry geo(*m->m, o.order);
  tsplit::SymTensorField p(phi->f.grid());
  p.raw() = phi->f.raw();
  auto* d = new ts_decomposition;
  if (do_york) {
    d->kind = "york";
    d->yk = std::make_shared<tsplit::YorkResult>(tsplit::york(geo, p, o.sopts, o.kopts));
    if (!d->yk->stats.converged) {
      set_error("solver did not converge");
      delete d;
      return TS_ERR_NOT_CONVERGED;
    }
  } else {
    d->kind = "berger_ebin";
    d->be = std::make_shared<tsplit::BergerEbinResult>(
        tsplit::berger_ebin(geo, p, o.sopts, o.kopts));
    if (!d->be->stats.converged) {
      set_error("solver did not converge");
      delete d;
      return TS_ERR_NOT_CONVERGED;
    }
  }
  *out = d;
  return TS_OK;
}

}  // namespace

ts_status ts_berger_ebin(const ts_metric* m, const ts_field* phi, const char* options_json,
                         ts_decomposition** out) {
  return guarded([&]() { return decompose_impl(m, phi, options_json, false, out); });
}

ts_status ts_york(const ts_metric* m, const ts_field* phi, const char* options_json,
                  ts_decomposition** out) {
  return guarded([&]() { return decompose_impl(m, phi, options_json, true, out); });
}

void ts_decomposition_destroy(ts_decomposition* d) { delete d; }

ts_status ts_decomposition_part(const ts_decomposition* d, const char* part, ts_field** out) {
  return guarded([&]() -> ts_status {
    if (!d || !part || !out) {
      set_error("null argument");
      return TS_ERR_INVALID_ARG;
    }
    const std::string p = part;
    const tsplit::Field* src = nullptr;
    if (d->be) {
      if (p == "theta") src = &d->be->theta;
      else if (p == "phi0") src = &d->be->phi0;
    } else if (d->yk) {
      if (p == "theta") src = &d->yk->theta;
      else if (p == "lambda") src = &d->yk->lambda;
      else if (p == "phi_tt") src = &d->yk->phi_tt;
    }
    if (!src) {
      set_error("unknown part '" + p + "' for " + d->kind + " decomposition");
      return TS_ERR_INVALID_ARG;
    }
    *out = new ts_field{*src};
    return TS_OK;
  });
}

ts_status ts_decomposition_diagnostics(const ts_decomposition* d, char** json_out) {
  return guarded([&]() -> ts_status {
    if (!d || !json_out) {
      set_error("null argument");
      return TS_ERR_INVALID_ARG;
    }
    nlohmann::json j;
    const tsplit::OrthoDiagnostics* diag = nullptr;
    const tsplit::SolveStats* st = nullptr;
    if (d->be) {
      diag = &d->be->diagnostics;
      st = &d->be->stats;
    } else if (d->yk) {
      diag = &d->yk->diagnostics;
      st = &d->yk->stats;
    }
    j["kind"] = d->kind;
    if (diag)
      for (const auto& [k, v] : diag->values) j["diagnostics"][k] = v;
    if (st) {
      j["stats"] = {{"iterations", st->iterations},
                    {"final_rel_residual", st->final_rel_residual},
                    {"kernel_dim_deflated", st->kernel_dim_deflated},
                    {"converged", st->converged}};
    }
    *json_out = dup_string(j.dump());
    return TS_OK;
  });
}

ts_status ts_run(const char* config_json, char** report_json_out, int32_t* exit_code_out) {
  return guarded([&]() -> ts_status {
    if (!config_json || !report_json_out || !exit_code_out) {
      set_error("null argument");
      return TS_ERR_INVALID_ARG;
    }
    std::string report;
    const int code = tsplit::run_text(config_json, report);
    *report_json_out = dup_string(report);
    *exit_code_out = code;
    return TS_OK;
  });
}

}  // extern "C"
