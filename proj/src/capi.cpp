#include "bakerlab.h"

#include <cstring>
#include <string>
#include <vector>

#include "bakerlab/acceptance.hpp"
#include "bakerlab/errors.hpp"
#include "bakerlab/experiments.hpp"
#include "bakerlab/maps.hpp"

extern "C" {

struct bakerlab_experiment {
  nlohmann::json config;
  std::string report;
  std::vector<std::pair<std::string, std::string>> csvs;
  bool has_run = false;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int classify_exception(const std::exception& e) {
  g_last_error = e.what();
  if (dynamic_cast<const bakerlab::ConfigError*>(&e)) return BAKERLAB_ERR_CONFIG;
  return BAKERLAB_ERR_COMPUTE;
}

}  // namespace

const char* bakerlab_version(void) { return bakerlab::kVersion; }

const char* bakerlab_last_error(void) { return g_last_error.c_str(); }

int bakerlab_experiment_create(const char* config_json, bakerlab_experiment** out) {
  if (out) *out = nullptr;
  if (!config_json || !out) {
    g_last_error = "null argument";
    return BAKERLAB_ERR_CONFIG;
  }
  try {
    nlohmann::json cfg = nlohmann::json::parse(config_json);
    if (!cfg.is_object() || !cfg.contains("experiment") || !cfg.at("experiment").is_string())
      throw bakerlab::ConfigError("ConfigError", "config requires a string 'experiment' field");
    auto* handle = new bakerlab_experiment;
    handle->config = std::move(cfg);
    *out = handle;
    return BAKERLAB_OK;
  } catch (const nlohmann::json::parse_error& e) {
    g_last_error = std::string("config is not valid JSON: ") + e.what();
    return BAKERLAB_ERR_CONFIG;
  } catch (const std::exception& e) {
    return classify_exception(e);
  }
}

int bakerlab_experiment_run(bakerlab_experiment* exp, int threads) {
  if (!exp) {
    g_last_error = "null experiment handle";
    return BAKERLAB_ERR_CONFIG;
  }
  try {
    bakerlab::RunResult rr = bakerlab::run_experiment(exp->config, threads);
    exp->report = rr.report.dump(2);
    exp->csvs = std::move(rr.csv_files);
    exp->has_run = true;
    return BAKERLAB_OK;
  } catch (const std::exception& e) {
    return classify_exception(e);
  }
}

const char* bakerlab_experiment_report(const bakerlab_experiment* exp) {
  if (!exp || !exp->has_run) return nullptr;
  return exp->report.c_str();
}

int bakerlab_experiment_csv_count(const bakerlab_experiment* exp) {
  return exp ? static_cast<int>(exp->csvs.size()) : 0;
}

const char* bakerlab_experiment_csv_name(const bakerlab_experiment* exp, int index) {
  if (!exp || index < 0 || index >= static_cast<int>(exp->csvs.size())) return nullptr;
  return exp->csvs[index].first.c_str();
}

const char* bakerlab_experiment_csv_data(const bakerlab_experiment* exp, int index) {
  if (!exp || index < 0 || index >= static_cast<int>(exp->csvs.size())) return nullptr;
  return exp->csvs[index].second.c_str();
}

void bakerlab_experiment_destroy(bakerlab_experiment* exp) { delete exp; }

int bakerlab_maps_catalog(char** out) {
  if (!out) {
    g_last_error = "null argument";
    return BAKERLAB_ERR_CONFIG;
  }
  std::string text;
  for (const auto& info : bakerlab::registry_catalog()) {
    text += info.name + ": " + info.formula;
    if (!info.params_doc.empty()) text += " {" + info.params_doc + "}";
    text += " (" + info.origin + ")\n";
  }
  *out = dup_string(text);
  return *out ? BAKERLAB_OK : BAKERLAB_ERR_COMPUTE;
}

int bakerlab_selftest(int threads, char** report_out) {
  try {
    auto results = bakerlab::run_acceptance(threads);
    std::string text = bakerlab::format_acceptance(results);
    if (report_out) *report_out = dup_string(text);
    for (const auto& r : results)
      if (!r.pass) return BAKERLAB_ERR_COMPUTE;
    return BAKERLAB_OK;
  } catch (const std::exception& e) {
    return classify_exception(e);
  }
}

void bakerlab_string_free(char* s) { std::free(s); }

}  // extern "C"
