// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "beamsep/beamform.hpp"
#include "beamsep/config.hpp"
#include "beamsep/manifest.hpp"
#include "beamsep/mask.hpp"
#include "beamsep/metrics.hpp"
#include "beamsep/pipeline.hpp"
#include "beamsep/stft.hpp"
#include "beamsep/tensor_io.hpp"
#include "beamsep/wav_io.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace beamsep;

constexpr double kPi = 3.14159265358979323846;
namespace fs = std::filesystem;

namespace {

std::string tmp_dir(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// small rooms keep the image count down; the t60 floor stays above the
// sabine feasibility limit for the largest room in the range
PipelineConfig small_config() {
  return PipelineConfig::from_json_text(R"({
    "seed": 7,
    "source_duration_s": 1.2,
    "ranges": {"room_min": [3.2, 3.2, 2.3], "room_max": [4.2, 4.2, 2.8],
               "t60_min": 0.12, "t60_max": 0.18,
               "distance_min": 1.0, "distance_max": 1.6, "wall_margin": 0.4}
  })");
}

PipelineConfig fast_config() {
  return PipelineConfig::from_json_text(R"({
    "seed": 11,
    "source_duration_s": 0.8,
    "ranges": {"room_min": [3.2, 3.2, 2.3], "room_max": [4.2, 4.2, 2.8],
               "t60_min": 0.12, "t60_max": 0.18,
               "distance_min": 1.0, "distance_max": 1.6, "wall_margin": 0.4}
  })");
}

struct Dataset {
  PipelineConfig config;
  std::string dir;
  std::string manifest_path;
};

// one shared two-utterance dataset for the read-only pipeline tests
const Dataset &shared_dataset() {
  static const Dataset d = [] {
    Dataset x;
    x.config = small_config();
    x.dir = tmp_dir("beamsep_pipe_data");
    SimulateOptions opts;
    opts.config = x.config;
    opts.count = 2;
    opts.out_dir = x.dir;
    opts.jobs = 1;
    x.manifest_path = run_simulate(opts);
    return x;
  }();
  return d;
}

SeparateRunSummary separate_into(const Dataset &d, const std::string &out_dir,
                                 SeparationMethod method, MaskSource source,
                                 const std::string &tensor_dir = "") {
  SeparateOptions opts;
  opts.config = d.config;
  opts.manifest_path = d.manifest_path;
  opts.method = method;
  opts.mask_source = source;
  opts.out_dir = out_dir;
  opts.tensor_dir = tensor_dir;
  opts.jobs = 1;
  return run_separate(opts);
}

EvalReport evaluate_dir(const Dataset &d, const std::string &separated_dir,
                        const std::string &report_path = "") {
  EvaluateOptions opts;
  opts.config = d.config;
  opts.manifest_path = d.manifest_path;
  opts.separated_dir = separated_dir;
  opts.report_path = report_path;
  opts.jobs = 1;
  return run_evaluate(opts);
}

}  // namespace

TEST_CASE("method and mask source names round trip") {
  for (const auto m : {SeparationMethod::kTfMask, SeparationMethod::kFilterSum,
                       SeparationMethod::kMvdr, SeparationMethod::kDelaySum})
    CHECK(parse_method(method_name(m)) == m);
  for (const auto s :
       {MaskSource::kOracle, MaskSource::kAfHeuristic, MaskSource::kFile})
    CHECK(parse_mask_source(mask_source_name(s)) == s);
  CHECK_THROWS_AS(parse_method("banana"), ConfigError);
  CHECK_THROWS_AS(parse_mask_source("banana"), ConfigError);
}

TEST_CASE("run_simulate writes a complete, well-formed dataset") {
  const Dataset &d = shared_dataset();
  CHECK(fs::path(d.manifest_path).filename() == "manifest.json");

  const Manifest m = read_manifest(d.manifest_path);
  CHECK(m.master_seed == 7);
  CHECK(m.config_fingerprint == d.config.fingerprint());
  REQUIRE(m.utterances.size() == 2);
  CHECK(m.utterances[0].id == "utt_0000");
  CHECK(m.utterances[1].id == "utt_0001");

  for (const UtteranceEntry &u : m.utterances) {
    CHECK(u.doa_deg == u.scene.target_doa_deg);
    const auto mixture = read_wav(m.resolve(u.mixture_path));
    const auto target = read_wav(m.resolve(u.target_stem_path));
    const auto interferer = read_wav(m.resolve(u.interferer_stem_path));
    CHECK(mixture.num_channels == 15);
    CHECK(mixture.sample_rate == 16000);
    CHECK(mixture.num_samples >= size_t(1.2 * 16000));
    CHECK(target.num_samples == mixture.num_samples);
    CHECK(interferer.num_samples == mixture.num_samples);
  }

  SimulateOptions bad;
  bad.config = d.config;
  bad.count = 1;
  CHECK_THROWS_WITH_AS(run_simulate(bad), "simulate: out_dir is required",
                       ConfigError);
  bad.out_dir = tmp_dir("beamsep_pipe_zero");
  bad.count = 0;
  CHECK_THROWS_WITH_AS(run_simulate(bad), "simulate: count must be positive",
                       ConfigError);
}

TEST_CASE("run_simulate output is byte-identical across job counts") {
  const PipelineConfig config = fast_config();
  std::string dirs[2] = {tmp_dir("beamsep_pipe_det1"),
                         tmp_dir("beamsep_pipe_det4")};
  for (int i = 0; i < 2; ++i) {
    SimulateOptions opts;
    opts.config = config;
    opts.count = 2;
    opts.out_dir = dirs[i];
    opts.jobs = i == 0 ? 1 : 4;
    run_simulate(opts);
  }
  for (const char *name :
       {"manifest.json", "utt_0000_mixture.wav", "utt_0000_target.wav",
        "utt_0000_interferer.wav", "utt_0001_mixture.wav",
        "utt_0001_target.wav", "utt_0001_interferer.wav"}) {
    CHECK(slurp((fs::path(dirs[0]) / name).string()) ==
          slurp((fs::path(dirs[1]) / name).string()));
  }
}

TEST_CASE("tf_mask with oracle masks separates and evaluates positive") {
  const Dataset &d = shared_dataset();
  const std::string out = tmp_dir("beamsep_pipe_tfmask");
  const SeparateRunSummary s =
      separate_into(d, out, SeparationMethod::kTfMask, MaskSource::kOracle);
  CHECK(s.num_ok == 2);
  CHECK(s.num_failed == 0);

  const auto log = nlohmann::json::parse(slurp(s.log_path));
  CHECK(log.at("schema_version") == 1);
  CHECK(log.at("method") == "tf_mask");
  CHECK(log.at("mask_source") == "oracle");
  CHECK(log.at("config_fingerprint") == d.config.fingerprint());
  REQUIRE(log.at("utterances").size() == 2);
  for (const auto &u : log.at("utterances")) {
    CHECK(u.at("ok") == true);
    CHECK(u.at("seconds").get<double>() >= 0.0);
  }

  const Manifest m = read_manifest(d.manifest_path);
  const auto mixture = read_wav(m.resolve(m.utterances[0].mixture_path));
  const auto separated =
      read_wav((fs::path(out) / "utt_0000.wav").string());
  CHECK(separated.num_channels == 1);
  CHECK(separated.num_samples == mixture.num_samples);

  const std::string report_path = (fs::path(out) / "report.json").string();
  const EvalReport rep = evaluate_dir(d, out, report_path);
  CHECK(rep.complete);
  CHECK(rep.method == "tf_mask,oracle");
  REQUIRE(rep.utterances.size() == 2);
  for (const auto &u : rep.utterances) {
    CHECK(u.ok);
    CHECK(u.delta > 3.0);  // oracle masking is a big win on overlapped speech
  }
  CHECK(rep.mean_delta > 3.0);

  const auto jrep = nlohmann::json::parse(slurp(report_path));
  CHECK(jrep.at("summary").at("mean_delta_db").get<double>() ==
        doctest::Approx(rep.mean_delta));
}

TEST_CASE("run_separate is deterministic") {
  const Dataset &d = shared_dataset();
  const std::string a = tmp_dir("beamsep_pipe_ds_a");
  const std::string b = tmp_dir("beamsep_pipe_ds_b");
  separate_into(d, a, SeparationMethod::kDelaySum, MaskSource::kOracle);
  SeparateOptions opts;
  opts.config = d.config;
  opts.manifest_path = d.manifest_path;
  opts.method = SeparationMethod::kDelaySum;
  opts.mask_source = MaskSource::kOracle;
  opts.out_dir = b;
  opts.jobs = 4;
  run_separate(opts);
  for (const char *name : {"utt_0000.wav", "utt_0001.wav"})
    CHECK(slurp((fs::path(a) / name).string()) ==
          slurp((fs::path(b) / name).string()));
}

TEST_CASE("evaluating mixture copies scores zero delta, stem copies the cap") {
  const Dataset &d = shared_dataset();
  const Manifest m = read_manifest(d.manifest_path);
  const size_t ref = d.config.geometry.reference_index;

  const std::string mix_dir = tmp_dir("beamsep_pipe_mixcopy");
  const std::string stem_dir = tmp_dir("beamsep_pipe_stemcopy");
  for (const UtteranceEntry &u : m.utterances) {
    const auto mixture = read_wav(m.resolve(u.mixture_path));
    const auto stem = read_wav(m.resolve(u.target_stem_path));
    MultiChannelWaveform mix_ref = MultiChannelWaveform::from_mono(
        std::vector<double>(mixture.channel(ref),
                            mixture.channel(ref) + mixture.num_samples),
        mixture.sample_rate);
    MultiChannelWaveform stem_ref = MultiChannelWaveform::from_mono(
        std::vector<double>(stem.channel(ref),
                            stem.channel(ref) + stem.num_samples),
        stem.sample_rate);
    write_wav((fs::path(mix_dir) / (u.id + ".wav")).string(), mix_ref,
              WavEncoding::kFloat32);
    write_wav((fs::path(stem_dir) / (u.id + ".wav")).string(), stem_ref,
              WavEncoding::kFloat32);
  }

  const EvalReport mix_rep = evaluate_dir(d, mix_dir);
  CHECK(mix_rep.complete);
  CHECK(mix_rep.method == "unknown");  // no run log in a hand-built dir
  for (const auto &u : mix_rep.utterances) {
    CHECK(u.ok);
    CHECK(std::abs(u.delta) < 1e-9);
  }

  const EvalReport stem_rep = evaluate_dir(d, stem_dir);
  CHECK(stem_rep.complete);
  for (const auto &u : stem_rep.utterances) {
    CHECK(u.ok);
    CHECK(u.si_snr_out == kSiSnrCapDb);
  }
}

TEST_CASE("delay_sum needs no stems; oracle masks fail without them") {
  const PipelineConfig config = fast_config();
  Dataset d;
  d.config = config;
  d.dir = tmp_dir("beamsep_pipe_nostems");
  SimulateOptions opts;
  opts.config = config;
  opts.count = 1;
  opts.out_dir = d.dir;
  opts.jobs = 1;
  d.manifest_path = run_simulate(opts);

  fs::remove(fs::path(d.dir) / "utt_0000_target.wav");
  fs::remove(fs::path(d.dir) / "utt_0000_interferer.wav");

  const SeparateRunSummary ok = separate_into(
      d, tmp_dir("beamsep_pipe_nostems_ds"), SeparationMethod::kDelaySum,
      MaskSource::kOracle);
  CHECK(ok.num_ok == 1);
  CHECK(ok.num_failed == 0);

  // per-utterance failure is recorded, not fatal
  const SeparateRunSummary failed = separate_into(
      d, tmp_dir("beamsep_pipe_nostems_tf"), SeparationMethod::kTfMask,
      MaskSource::kOracle);
  CHECK(failed.num_ok == 0);
  CHECK(failed.num_failed == 1);
  const auto log = nlohmann::json::parse(slurp(failed.log_path));
  CHECK(log.at("utterances")[0].at("ok") == false);
  CHECK_FALSE(log.at("utterances")[0].at("error").get<std::string>().empty());
}

TEST_CASE("file mask source: missing tensors fail per utterance, real ones work") {
  const Dataset &d = shared_dataset();
  const Manifest m = read_manifest(d.manifest_path);
  const StftConfig cfg = d.config.stft_config();

  const std::string empty_tensors = tmp_dir("beamsep_pipe_no_tensors");
  const SeparateRunSummary missing =
      separate_into(d, tmp_dir("beamsep_pipe_file_missing"),
                    SeparationMethod::kTfMask, MaskSource::kFile, empty_tensors);
  CHECK(missing.num_ok == 0);
  CHECK(missing.num_failed == 2);

  // unity masks reproduce the reference channel of the mixture
  const std::string tensors = tmp_dir("beamsep_pipe_tensors");
  for (const UtteranceEntry &u : m.utterances) {
    const auto mixture = read_wav(m.resolve(u.mixture_path));
    const size_t frames = cfg.num_frames(mixture.num_samples);
    Tensor t;
    t.is_complex = true;
    t.shape = {frames, cfg.num_bins()};
    t.complex_data.assign(frames * cfg.num_bins(), {1.0, 0.0});
    write_tensor((fs::path(tensors) / (u.id + ".target.tensor")).string(), t);
  }
  const std::string out = tmp_dir("beamsep_pipe_file_out");
  const SeparateRunSummary s = separate_into(
      d, out, SeparationMethod::kTfMask, MaskSource::kFile, tensors);
  CHECK(s.num_ok == 2);

  const EvalReport rep = evaluate_dir(d, out);
  CHECK(rep.complete);
  CHECK(rep.method == "tf_mask,file");
  for (const auto &u : rep.utterances) CHECK(std::abs(u.delta) < 0.01);

  // a wrong-shape tensor is a per-utterance error
  Tensor bad;
  bad.is_complex = true;
  bad.shape = {3, cfg.num_bins()};
  bad.complex_data.assign(3 * cfg.num_bins(), {1.0, 0.0});
  write_tensor((fs::path(tensors) / "utt_0000.target.tensor").string(), bad);
  const SeparateRunSummary shape_fail = separate_into(
      d, tmp_dir("beamsep_pipe_file_bad"), SeparationMethod::kTfMask,
      MaskSource::kFile, tensors);
  CHECK(shape_fail.num_ok == 1);
  CHECK(shape_fail.num_failed == 1);
}

TEST_CASE("filter_sum applies externally supplied per-frame filters") {
  const Dataset &d = shared_dataset();
  const Manifest m = read_manifest(d.manifest_path);
  const StftConfig cfg = d.config.stft_config();
  const size_t ref = d.config.geometry.reference_index;
  const size_t C = d.config.geometry.num_channels();

  const std::string tensors = tmp_dir("beamsep_pipe_filters");
  for (const UtteranceEntry &u : m.utterances) {
    const auto mixture = read_wav(m.resolve(u.mixture_path));
    const size_t frames = cfg.num_frames(mixture.num_samples);
    Tensor t;
    t.is_complex = true;
    t.shape = {frames, cfg.num_bins(), C};
    t.complex_data.assign(frames * cfg.num_bins() * C, {0.0, 0.0});
    for (size_t i = ref; i < t.complex_data.size(); i += C)
      t.complex_data[i] = {1.0, 0.0};  // pass the reference channel through
    write_tensor((fs::path(tensors) / (u.id + ".filters.tensor")).string(), t);
  }
  const std::string out = tmp_dir("beamsep_pipe_filters_out");
  const SeparateRunSummary s = separate_into(
      d, out, SeparationMethod::kFilterSum, MaskSource::kFile, tensors);
  CHECK(s.num_ok == 2);

  const EvalReport rep = evaluate_dir(d, out);
  CHECK(rep.method == "filter_sum,file");
  for (const auto &u : rep.utterances) {
    CHECK(u.ok);
    CHECK(std::abs(u.delta) < 0.01);  // passthrough: output == mixture ref
  }
}

TEST_CASE("mvdr with heuristic masks completes on every utterance") {
  const Dataset &d = shared_dataset();
  const SeparateRunSummary s =
      separate_into(d, tmp_dir("beamsep_pipe_mvdr_af"), SeparationMethod::kMvdr,
                    MaskSource::kAfHeuristic);
  CHECK(s.num_ok == 2);
  CHECK(s.num_failed == 0);
}

TEST_CASE("evaluate handles an empty separated directory gracefully") {
  const Dataset &d = shared_dataset();
  const EvalReport rep = evaluate_dir(d, tmp_dir("beamsep_pipe_empty_sep"));
  CHECK_FALSE(rep.complete);
  REQUIRE(rep.utterances.size() == 2);
  for (const auto &u : rep.utterances) {
    CHECK_FALSE(u.ok);
    CHECK_FALSE(u.error.empty());
  }
  CHECK(rep.mean_delta == 0.0);
}

TEST_CASE("separate rejects a geometry that does not match the audio") {
  const Dataset &d = shared_dataset();
  const Manifest m = read_manifest(d.manifest_path);
  PipelineConfig three = d.config;
  three.geometry.mic_positions_relative = {{-0.1, 0, 0}, {0, 0, 0}, {0.1, 0, 0}};
  three.geometry.reference_index = 1;
  three.pairs = {{0, 2}};
  CHECK_THROWS_AS(separate_utterance(three, m, m.utterances[0],
                                     SeparationMethod::kDelaySum,
                                     MaskSource::kOracle, ""),
                  ShapeError);

  SeparateOptions opts;
  opts.config = d.config;
  opts.manifest_path = d.manifest_path;
  CHECK_THROWS_WITH_AS(run_separate(opts), "separate: out_dir is required",
                       ConfigError);
}

TEST_CASE("oracle masks are source selective end to end") {
  const Dataset &d = shared_dataset();
  const Manifest m = read_manifest(d.manifest_path);
  const UtteranceEntry &u = m.utterances[0];
  const StftConfig cfg = d.config.stft_config();
  const size_t ref = d.config.geometry.reference_index;

  const auto mixture = read_wav(m.resolve(u.mixture_path));
  const auto target = read_wav(m.resolve(u.target_stem_path));
  const auto interferer = read_wav(m.resolve(u.interferer_stem_path));

  const ComplexSpectrogram mix_ref = stft(mixture, cfg).channel(ref);
  const ComplexSpectrogram tgt_ref = stft(target, cfg).channel(ref);
  const ComplexSpectrogram int_ref = stft(interferer, cfg).channel(ref);

  const ComplexMask mask_t = oracle_crm(tgt_ref, mix_ref, d.config.mask_bound);
  const ComplexMask mask_i = oracle_crm(int_ref, mix_ref, d.config.mask_bound);

  auto score = [&](const ComplexMask &mask) {
    const auto sep =
        istft(apply_mask(mask, mix_ref), cfg, mixture.num_samples);
    MultiChannelWaveform stem_ref = MultiChannelWaveform::from_mono(
        std::vector<double>(target.channel(ref),
                            target.channel(ref) + target.num_samples),
        target.sample_rate);
    return si_snr(sep, stem_ref).value_db;
  };
  const double right = score(mask_t);
  const double wrong = score(mask_i);
  CHECK(right > wrong + 5.0);  // the swapped mask reconstructs the other talker
}

TEST_CASE("run_features exports well-formed spatial feature tensors") {
  const Dataset &d = shared_dataset();
  const Manifest m = read_manifest(d.manifest_path);
  const StftConfig cfg = d.config.stft_config();

  const std::string out = tmp_dir("beamsep_pipe_features");
  FeaturesOptions opts;
  opts.config = d.config;
  opts.manifest_path = d.manifest_path;
  opts.out_dir = out;
  opts.jobs = 1;
  run_features(opts);

  for (const UtteranceEntry &u : m.utterances) {
    const auto mixture = read_wav(m.resolve(u.mixture_path));
    const size_t frames = cfg.num_frames(mixture.num_samples);

    const Tensor ipd =
        read_tensor((fs::path(out) / (u.id + ".ipd.tensor")).string());
    CHECK_FALSE(ipd.is_complex);
    CHECK(ipd.shape == std::vector<size_t>{9, frames, cfg.num_bins()});
    for (double v : ipd.real_data) {
      CHECK(v > -kPi - 1e-9);
      CHECK(v <= kPi + 1e-9);
    }

    const Tensor af =
        read_tensor((fs::path(out) / (u.id + ".af.tensor")).string());
    CHECK_FALSE(af.is_complex);
    CHECK(af.shape == std::vector<size_t>{frames, cfg.num_bins()});
    for (double v : af.real_data) {
      CHECK(v >= -1.0 - 1e-9);
      CHECK(v <= 1.0 + 1e-9);
    }

    const Tensor steering =
        read_tensor((fs::path(out) / (u.id + ".steering.tensor")).string());
    CHECK(steering.is_complex);
    CHECK(steering.shape == std::vector<size_t>{15, cfg.num_bins()});
    for (const std::complex<double> &v : steering.complex_data)
      CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
  }

  // flags prune the outputs
  const std::string only_af = tmp_dir("beamsep_pipe_features_af");
  opts.out_dir = only_af;
  opts.write_ipd = false;
  opts.write_steering = false;
  run_features(opts);
  CHECK(fs::exists(fs::path(only_af) / "utt_0000.af.tensor"));
  CHECK_FALSE(fs::exists(fs::path(only_af) / "utt_0000.ipd.tensor"));
  CHECK_FALSE(fs::exists(fs::path(only_af) / "utt_0000.steering.tensor"));

  FeaturesOptions bad = opts;
  bad.out_dir = "";
  CHECK_THROWS_WITH_AS(run_features(bad), "features: out_dir is required",
                       ConfigError);
}
