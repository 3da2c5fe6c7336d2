// wqed: transmission spectra, collective modes and cavity-QED emulation for
// inhomogeneously broadened emitter ensembles in a 1D waveguide.

#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wqed/config.hpp"
#include "wqed/errors.hpp"
#include "wqed/io.hpp"
#include "wqed/run.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  long long seed = -1;
  std::string seeds_range;
  std::string out_dir;
  int threads = 0;
  bool gnuplot = false;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "config file (TOML-compatible)")
      ->required();
  cmd->add_option("--set", opts->sets, "override config keys, e.g. --set numerics.m=500");
  cmd->add_option("--seed", opts->seed, "single seed (overrides config)");
  cmd->add_option("--seeds", opts->seeds_range, "inclusive seed range A..B");
  cmd->add_option("--out", opts->out_dir, "output directory");
  cmd->add_option("--threads", opts->threads, "worker threads (default WQED_THREADS)");
  cmd->add_flag("--gnuplot", opts->gnuplot, "also emit a gnuplot script");
}

std::vector<std::string> overrides_from(const CommonOpts& opts,
                                        const std::string& experiment) {
  std::vector<std::string> sets = opts.sets;
  if (!experiment.empty()) sets.push_back("experiment=\"" + experiment + "\"");
  if (opts.seed >= 0) sets.push_back("seed=" + std::to_string(opts.seed));
  if (!opts.seeds_range.empty()) {
    const std::size_t dots = opts.seeds_range.find("..");
    if (dots == std::string::npos) {
      throw wqed::SchemaError("--seeds expects A..B, got " + opts.seeds_range);
    }
    sets.push_back("seed=" + opts.seeds_range.substr(0, dots));
    sets.push_back("seed_end=" + opts.seeds_range.substr(dots + 2));
  }
  if (!opts.out_dir.empty()) sets.push_back("output.dir=\"" + opts.out_dir + "\"");
  if (opts.threads > 0) sets.push_back("threads=" + std::to_string(opts.threads));
  if (opts.gnuplot) sets.push_back("output.gnuplot=true");
  return sets;
}

int dispatch(const CommonOpts& opts, const std::string& experiment,
             const std::string& axis) {
  const wqed::TomlDoc doc = wqed::toml_parse(wqed::read_text_file(opts.config_path));
  const std::vector<std::string> sets = overrides_from(opts, experiment);
  wqed::RunOutput out;
  if (!axis.empty()) {
    out = wqed::sweep(doc, axis, sets);
  } else {
    const wqed::TomlDoc final_doc = wqed::apply_overrides(doc, sets);
    wqed::RunConfig cfg = wqed::config_from_doc(final_doc);
    cfg.canonical_text = final_doc.emit();
    cfg.config_hash = wqed::fnv1a_hex(cfg.canonical_text);
    out = wqed::run(cfg);
  }
  for (const std::string& f : out.artifacts) std::printf("%s\n", f.c_str());
  return 0;
}

int fail_json(const wqed::Error& e) {
  nlohmann::json j;
  j["error"] = e.name();
  j["message"] = e.what();
  j["exit_code"] = static_cast<int>(e.kind());
  std::fprintf(stderr, "%s\n", j.dump(2).c_str());
  return static_cast<int>(e.kind());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"waveguide QED with inhomogeneously broadened ensembles"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> kCommands = {
      {"chi", "evaluate the ensemble response chi(delta_c) over a grid"},
      {"modes", "collective eigenvalues (dense / continuum / perturbative)"},
      {"transmit", "waveguide transmission spectrum"},
      {"oracle-compare", "exact N-emitter transmission vs binned reduction"},
      {"cqed-spectrum", "side-illumination spectrum of the mirror-qubit-mirror system"},
      {"rabi", "time-domain qubit population of the CQED layout"},
      {"report", "strong-coupling feasibility report (JSON)"},
      {"run", "run whatever experiment the config specifies"},
      {"sweep", "sweep a numeric config key (--axis key=v1,v2 or key=a:b:n[:log])"},
  };

  std::map<std::string, CommonOpts> opts;
  std::string axis;
  for (const auto& [name, desc] : kCommands) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    add_common(cmd, &opts[name]);
    if (name == "sweep") {
      cmd->add_option("--axis", axis, "axis spec, e.g. cqed.n_c=1e8:1e9:5:log");
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [name, desc] : kCommands) {
      if (app.got_subcommand(name)) {
        const bool pass_kind = name != "run" && name != "sweep";
        return dispatch(opts[name], pass_kind ? name : "", name == "sweep" ? axis : "");
      }
    }
  } catch (const wqed::Error& e) {
    return fail_json(e);
  } catch (const std::exception& e) {
    nlohmann::json j;
    j["error"] = "Unexpected";
    j["message"] = e.what();
    std::fprintf(stderr, "%s\n", j.dump(2).c_str());
    return 3;
  }
  return 1;
}
