// tensor-split: decompositions of symmetric 2-tensor fields on discrete tori
// and the associated curvature / hypersurface / harmonic-map checks.
//
// Talks to the core library exclusively through the C API (ts.h).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tensorsplit/ts.h"

namespace {

int fail_config(const std::string& msg) {
  std::cerr << "config error: " << msg << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L2-orthogonal decompositions of symmetric 2-tensor fields on flat tori"};
  app.set_version_flag("--version", std::string(ts_version()));

  std::string command;
  app.add_option("command", command,
                 "decompose | curvature | ricci | soliton | hypersurface | map | kernel | "
                 "convergence")
      ->required();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override its entries)");
  int grid_n = 0;
  app.add_option("--grid", grid_n, "points per axis (square/cubic grid)");
  int order = 0;
  app.add_option("--order", order, "stencil order (2 or 4)")->check(CLI::IsMember({2, 4}));
  double tol = 0.0;
  app.add_option("--tol", tol, "solver relative tolerance");
  std::int64_t seed = -1;
  app.add_option("--seed", seed, "seed for probes and random test fields");
  std::string out_path;
  app.add_option("--out", out_path, "write the report JSON here (default stdout)");
  std::string dump_dir;
  app.add_option("--dump-fields", dump_dir, "dump decomposition parts as field files");

  CLI11_PARSE(app, argc, argv);

  nlohmann::json config = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) return fail_config("cannot open " + config_path);
    try {
      in >> config;
    } catch (const std::exception& e) {
      return fail_config(std::string("cannot parse ") + config_path + ": " + e.what());
    }
  }
  config["command"] = command;
  if (grid_n > 0) {
    config["grid"]["N"] = grid_n;
    config["grid"].erase("dims");
    if (!config["grid"].contains("n")) config["grid"]["n"] = 2;
  }
  if (order > 0) config["order"] = order;
  if (tol > 0.0) config["solve"]["rel_tol"] = tol;
  if (seed >= 0) config["seed"] = seed;
  if (!dump_dir.empty()) config["output"]["dump_fields"] = dump_dir;

  char* report = nullptr;
  std::int32_t exit_code = 0;
  const ts_status st = ts_run(config.dump().c_str(), &report, &exit_code);
  if (st != TS_OK) {
    // parse / argument problems are config errors; anything else is internal
    std::cerr << "error: " << ts_last_error_message() << "\n";
    return (st == TS_ERR_PARSE || st == TS_ERR_INVALID_ARG || st == TS_ERR_IO ||
            st == TS_ERR_INDEFINITE_METRIC)
               ? 1
               : 4;
  }

  std::string text(report);
  ts_string_free(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) return fail_config("cannot write " + out_path);
    out << text << "\n";
  } else {
    std::cout << text << "\n";
  }

  // one line per check on stderr for quick scanning
  try {
    nlohmann::json rep = nlohmann::json::parse(text);
    for (const auto& c : rep.value("checks", nlohmann::json::array())) {
      if (!c.contains("passed") || c.at("passed").is_null()) continue;
      std::cerr << (c.at("passed").get<bool>() ? "PASS " : "FAIL ")
                << c.at("name").get<std::string>();
      if (c.contains("value") && c.at("value").is_number())
        std::cerr << " (" << c.at("value").get<double>() << ")";
      std::cerr << "\n";
    }
  } catch (...) {
  }
  return exit_code;
}
