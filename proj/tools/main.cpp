// Command-line front end for the cut-membrane benchmark suite. Talks to the
// solver library exclusively through its C interface.

#include "cutmem.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  bool deterministic = false;
  bool quiet = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw CLI::ValidationError("--config", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_report(const std::string& name, const std::string& report_json,
                  bool quiet) {
  const auto report = nlohmann::json::parse(report_json, nullptr, false);
  if (report.is_discarded()) {
    std::cout << report_json << "\n";
    return;
  }

  if (report.contains("rows") && report["rows"].is_array() &&
      !report["rows"].empty()) {
    std::printf("%12s %10s %10s %14s %8s\n", "h", "nno", "ndof", "error", "rate");
    for (const auto& r : report["rows"]) {
      std::printf("%12.6g %10ld %10ld %14.6g", r["h"].get<double>(),
                  r["nno"].get<long>(), r["ndof"].get<long>(),
                  r["error"].get<double>());
      if (r.contains("rate"))
        std::printf(" %8.3f", r["rate"].get<double>());
      std::printf("\n");
    }
  }
  if (report.contains("probe")) {
    const auto& p = report["probe"];
    std::printf("mean displacement without membranes: %.8g\n",
                p["mean_without_membranes"].get<double>());
    std::printf("mean displacement with membranes:    %.8g\n",
                p["mean_with_membranes"].get<double>());
    std::printf("ratio: %.6g\n", p["ratio"].get<double>());
  }
  if (report.contains("sweep")) {
    for (const auto& entry : report["sweep"]) {
      std::printf("delta %-10.3g", entry["delta"].get<double>());
      for (const auto& t : entry["taus"]) {
        std::ostringstream kappa;
        if (t["kappa"].is_number())
          kappa << t["kappa"].get<double>();
        else
          kappa << t["kappa"].get<std::string>();
        std::printf("  tau0=%-4g kappa=%-12s", t["tau0"].get<double>(),
                    kappa.str().c_str());
      }
      std::printf("\n");
    }
  }
  if (!quiet) {
    std::printf("[%s] done in %.2fs\n", name.c_str(),
                report.value("elapsed_seconds", 0.0));
  }
}

int run_one(const std::string& name, const CommonOptions& opt) {
  std::string config;
  if (!opt.config_path.empty()) config = read_file(opt.config_path);

  char* report = nullptr;
  const cutmem_status status = cutmem_run_benchmark(
      name.c_str(), config.empty() ? nullptr : config.c_str(),
      opt.out_dir.empty() ? nullptr : opt.out_dir.c_str(),
      opt.deterministic ? 1 : 0, &report);
  if (status != CUTMEM_OK) {
    std::cerr << "error (" << static_cast<int>(status)
              << "): " << cutmem_last_error() << "\n";
    return 1;
  }
  if (report != nullptr) {
    print_report(name, report, opt.quiet);
    cutmem_string_free(report);
  }
  if (!opt.out_dir.empty() && !opt.quiet)
    std::cout << "artifacts written to " << opt.out_dir << "\n";
  return 0;
}

void add_benchmark(CLI::App& app, const std::string& name,
                   const std::string& description, CommonOptions& opt,
                   int& exit_code) {
  CLI::App* sub = app.add_subcommand(name, description);
  sub->add_option("--config", opt.config_path,
                  "JSON file merged over the built-in defaults");
  sub->add_option("--out", opt.out_dir, "directory for tables, VTK files, and "
                                        "the run log");
  sub->add_flag("--deterministic", opt.deterministic,
                "record the run as reproducible (execution is always "
                "sequential and seeded)");
  sub->add_flag("--quiet", opt.quiet, "suppress the closing summary lines");
  sub->callback([&opt, &exit_code, name] {
    if (opt.out_dir.empty()) opt.out_dir = "out/" + name;
    exit_code = run_one(name, opt);
  });
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut finite element benchmarks for implicitly defined "
               "membranes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cutmem_version()));

  CommonOptions opt;
  int exit_code = 0;
  add_benchmark(app, "cylinder",
                "pulled cylindrical membrane, stress against the closed form",
                opt, exit_code);
  add_benchmark(app, "oblate",
                "spheroid membrane with a manufactured load", opt, exit_code);
  add_benchmark(app, "stiffened-beam",
                "elastic block reinforced by embedded membrane planes", opt,
                exit_code);
  add_benchmark(app, "bending-beam",
                "bending block with an embedded cylindrical stiffener", opt,
                exit_code);
  add_benchmark(app, "conditioning",
                "stiffness conditioning as the surface approaches mesh nodes",
                opt, exit_code);

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
