// bakerlab command-line driver. Talks to the core library through the C API
// only; see include/bakerlab.h.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bakerlab.h"

namespace {

int fail_with(int code, const std::string& context) {
  std::cerr << "bakerlab: " << context;
  const char* msg = bakerlab_last_error();
  if (msg && *msg) std::cerr << ": " << msg;
  std::cerr << "\n";
  return code;
}

int cmd_run(const std::string& config_path, int threads, const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "bakerlab: cannot open config file '" << config_path << "'\n";
    return BAKERLAB_ERR_CONFIG;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  bakerlab_experiment* exp = nullptr;
  int rc = bakerlab_experiment_create(buf.str().c_str(), &exp);
  if (rc != BAKERLAB_OK) return fail_with(rc, "config error");
  rc = bakerlab_experiment_run(exp, threads);
  if (rc != BAKERLAB_OK) {
    int code = fail_with(rc, "run failed");
    bakerlab_experiment_destroy(exp);
    return code;
  }

  const char* report = bakerlab_experiment_report(exp);
  if (out_dir.empty()) {
    std::cout << report << "\n";
  } else {
    std::filesystem::create_directories(out_dir);
    std::ofstream rep(std::filesystem::path(out_dir) / "report.json");
    rep << report << "\n";
    std::cout << (std::filesystem::path(out_dir) / "report.json").string() << "\n";
  }
  int n = bakerlab_experiment_csv_count(exp);
  for (int i = 0; i < n; ++i) {
    std::string name = bakerlab_experiment_csv_name(exp, i);
    if (out_dir.empty()) {
      // without --out the CSV payload goes next to the current directory
      std::ofstream csv(name);
      csv << bakerlab_experiment_csv_data(exp, i);
      std::cerr << "wrote " << name << "\n";
    } else {
      auto path = std::filesystem::path(out_dir) / name;
      std::ofstream csv(path);
      csv << bakerlab_experiment_csv_data(exp, i);
      std::cout << path.string() << "\n";
    }
  }
  bakerlab_experiment_destroy(exp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bakerlab: numerical experiments on invariant Baker domains"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--threads", threads, "worker threads (default: BAKERLAB_THREADS or hardware)");
  run->add_option("--out", out_dir, "directory for report.json and CSV artifacts");

  auto* maps = app.add_subcommand("maps", "list the registered maps");

  int st_threads = 0;
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--threads", st_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : BAKERLAB_ERR_CONFIG;
  }

  if (run->parsed()) return cmd_run(config_path, threads, out_dir);

  if (maps->parsed()) {
    char* text = nullptr;
    int rc = bakerlab_maps_catalog(&text);
    if (rc != BAKERLAB_OK) return fail_with(rc, "catalog failed");
    std::cout << text;
    bakerlab_string_free(text);
    return 0;
  }

  if (selftest->parsed()) {
    char* text = nullptr;
    int rc = bakerlab_selftest(st_threads, &text);
    if (text) {
      std::cout << text;
      bakerlab_string_free(text);
    }
    return rc == BAKERLAB_OK ? 0 : BAKERLAB_ERR_COMPUTE;
  }
  return BAKERLAB_ERR_CONFIG;
}
