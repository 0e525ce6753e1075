// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// beamsep: simulate / separate / evaluate / features
// exit codes: 0 success, 1 config or usage error, 2 partial failure

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "beamsep/config.hpp"
#include "beamsep/metrics.hpp"
#include "beamsep/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
};

beamsep::PipelineConfig load_config(const CommonArgs &args) {
  beamsep::PipelineConfig config;
  if (!args.config_path.empty())
    config = beamsep::PipelineConfig::load(args.config_path);
  if (args.seed_set) config.seed = args.seed;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"multi-channel overlapped speech separation toolkit"};
  app.require_subcommand(1);

  CommonArgs common;
  app.add_option("--config", common.config_path,
                 "JSON config file (defaults used when omitted)");
  auto *seed_opt =
      app.add_option("--seed", common.seed, "master seed (overrides config)");
  app.add_option("--jobs", common.jobs,
                 "worker threads, 0 = all cores (default 0)");

  // simulate
  auto *sim = app.add_subcommand("simulate", "render a simulated corpus");
  size_t count = 20;
  std::string sim_out;
  sim->add_option("--count", count, "number of utterances (default 20)");
  sim->add_option("--out-dir", sim_out, "output directory")->required();

  // separate
  auto *sep = app.add_subcommand("separate", "separate a simulated corpus");
  std::string sep_manifest, sep_out, sep_tensors;
  std::string method = "mvdr", mask_source = "oracle";
  sep->add_option("--manifest", sep_manifest, "manifest.json path")->required();
  sep->add_option("--method", method,
                  "tf_mask | filter_sum | mvdr | delay_sum (default mvdr)");
  sep->add_option("--mask-source", mask_source,
                  "oracle | af_heuristic | file (default oracle)");
  sep->add_option("--tensor-dir", sep_tensors,
                  "mask/filter tensors for --mask-source file "
                  "(default: <manifest dir>/masks)");
  sep->add_option("--out-dir", sep_out, "output directory")->required();

  // evaluate
  auto *eval = app.add_subcommand("evaluate", "score separated outputs");
  std::string eval_manifest, eval_sep, eval_report;
  eval->add_option("--manifest", eval_manifest, "manifest.json path")
      ->required();
  eval->add_option("--separated-dir", eval_sep, "directory of separated WAVs")
      ->required();
  eval->add_option("--report", eval_report, "JSON report output path");

  // features
  auto *feat = app.add_subcommand("features", "export spatial features");
  std::string feat_manifest, feat_out;
  std::string kind = "all";
  feat->add_option("--manifest", feat_manifest, "manifest.json path")
      ->required();
  feat->add_option("--out-dir", feat_out, "output directory")->required();
  feat->add_option("--kind", kind, "ipd | af | steering | all (default all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }
  common.seed_set = seed_opt->count() > 0;

  try {
    if (sim->parsed()) {
      beamsep::SimulateOptions opts;
      opts.config = load_config(common);
      opts.count = count;
      opts.out_dir = sim_out;
      opts.jobs = common.jobs;
      std::string manifest_path = beamsep::run_simulate(opts);
      std::cout << manifest_path << "\n";
      return 0;
    }
    if (sep->parsed()) {
      beamsep::SeparateOptions opts;
      opts.config = load_config(common);
      opts.manifest_path = sep_manifest;
      opts.method = beamsep::parse_method(method);
      opts.mask_source = beamsep::parse_mask_source(mask_source);
      opts.out_dir = sep_out;
      opts.tensor_dir = sep_tensors;
      opts.jobs = common.jobs;
      beamsep::SeparateRunSummary summary = beamsep::run_separate(opts);
      std::cout << "separated " << summary.num_ok << " utterances, "
                << summary.num_failed << " failed; log: " << summary.log_path
                << "\n";
      return summary.num_failed > 0 ? 2 : 0;
    }
    if (eval->parsed()) {
      beamsep::EvaluateOptions opts;
      opts.config = load_config(common);
      opts.manifest_path = eval_manifest;
      opts.separated_dir = eval_sep;
      opts.report_path = eval_report;
      opts.jobs = common.jobs;
      beamsep::EvalReport report = beamsep::run_evaluate(opts);
      std::cout << beamsep::report_to_table(report);
      return report.complete ? 0 : 2;
    }
    if (feat->parsed()) {
      beamsep::FeaturesOptions opts;
      opts.config = load_config(common);
      opts.manifest_path = feat_manifest;
      opts.out_dir = feat_out;
      opts.jobs = common.jobs;
      if (kind != "all" && kind != "ipd" && kind != "af" && kind != "steering")
        throw beamsep::ConfigError("unknown feature kind \"" + kind + "\"");
      opts.write_ipd = kind == "all" || kind == "ipd";
      opts.write_af = kind == "all" || kind == "af";
      opts.write_steering = kind == "all" || kind == "steering";
      beamsep::run_features(opts);
      std::cout << "features written to " << feat_out << "\n";
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
