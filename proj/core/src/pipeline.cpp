// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "json.hpp"

#include "beamsep/beamform.hpp"
#include "beamsep/mask.hpp"
#include "beamsep/rng.hpp"
#include "beamsep/room.hpp"
#include "beamsep/sources.hpp"
#include "beamsep/spatial.hpp"
#include "beamsep/stft.hpp"
#include "beamsep/tensor_io.hpp"
#include "beamsep/wav_io.hpp"

namespace fs = std::filesystem;

namespace beamsep {

SeparationMethod parse_method(const std::string &name) {
  if (name == "tf_mask") return SeparationMethod::kTfMask;
  if (name == "filter_sum") return SeparationMethod::kFilterSum;
  if (name == "mvdr") return SeparationMethod::kMvdr;
  if (name == "delay_sum") return SeparationMethod::kDelaySum;
  throw ConfigError("unknown method \"" + name +
                    "\" (expected tf_mask, filter_sum, mvdr or delay_sum)");
}

MaskSource parse_mask_source(const std::string &name) {
  if (name == "oracle") return MaskSource::kOracle;
  if (name == "af_heuristic") return MaskSource::kAfHeuristic;
  if (name == "file") return MaskSource::kFile;
  throw ConfigError("unknown mask source \"" + name +
                    "\" (expected oracle, af_heuristic or file)");
}

std::string method_name(SeparationMethod method) {
  switch (method) {
    case SeparationMethod::kTfMask: return "tf_mask";
    case SeparationMethod::kFilterSum: return "filter_sum";
    case SeparationMethod::kMvdr: return "mvdr";
    case SeparationMethod::kDelaySum: return "delay_sum";
  }
  return "?";
}

std::string mask_source_name(MaskSource source) {
  switch (source) {
    case MaskSource::kOracle: return "oracle";
    case MaskSource::kAfHeuristic: return "af_heuristic";
    case MaskSource::kFile: return "file";
  }
  return "?";
}

namespace {

// schedules fn(0..n-1) across up to `jobs` threads; rethrows the first
// exception after all workers join
void parallel_for(size_t n, int jobs, const std::function<void(size_t)> &fn) {
  if (n == 0) return;
  size_t workers = jobs > 0 ? static_cast<size_t>(jobs)
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread &t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string utt_id(size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "utt_%04zu", index);
  return std::string(buf);
}

MultiChannelWaveform mono_channel(const MultiChannelWaveform &wave, size_t c) {
  if (c >= wave.num_channels)
    throw ShapeError("channel index out of range");
  std::vector<double> samples(wave.channel(c),
                              wave.channel(c) + wave.num_samples);
  return MultiChannelWaveform::from_mono(std::move(samples), wave.sample_rate);
}

}  // namespace

std::string run_simulate(const SimulateOptions &opts) {
  opts.config.validate();
  if (opts.out_dir.empty()) throw ConfigError("simulate: out_dir is required");
  if (opts.count == 0) throw ConfigError("simulate: count must be positive");

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) throw IoError("cannot create " + opts.out_dir + ": " + ec.message());

  const PipelineConfig &config = opts.config;
  std::vector<UtteranceEntry> entries(opts.count);

  parallel_for(opts.count, opts.jobs, [&](size_t u) {
    Rng rng(derive_seed(config.seed, u));
    SceneSpec scene = sample_scene(rng, config.ranges);
    MultiChannelWaveform target =
        synth_speech_like(rng, config.source_duration_s, config.sample_rate);
    MultiChannelWaveform interferer =
        synth_speech_like(rng, config.source_duration_s, config.sample_rate);
    MixtureBundle bundle = synthesize_mixture(scene, target, interferer,
                                              config.geometry,
                                              config.hop_length);

    UtteranceEntry &e = entries[u];
    e.id = utt_id(u);
    e.scene = scene;
    e.doa_deg = scene.target_doa_deg;
    e.mixture_path = e.id + "_mixture.wav";
    e.target_stem_path = e.id + "_target.wav";
    e.interferer_stem_path = e.id + "_interferer.wav";
    write_wav((fs::path(opts.out_dir) / e.mixture_path).string(),
              bundle.mixture);
    write_wav((fs::path(opts.out_dir) / e.target_stem_path).string(),
              bundle.target_reverberant);
    write_wav((fs::path(opts.out_dir) / e.interferer_stem_path).string(),
              bundle.interferer_reverberant);
  });

  Manifest manifest;
  manifest.master_seed = config.seed;
  manifest.config_fingerprint = config.fingerprint();
  manifest.utterances = std::move(entries);
  std::string manifest_path = (fs::path(opts.out_dir) / "manifest.json").string();
  write_manifest(manifest, manifest_path);
  return manifest_path;
}

namespace {

ComplexMask mask_from_tensor(const std::string &path, size_t num_frames,
                             size_t num_bins) {
  Tensor t = read_tensor(path);
  if (!t.is_complex || t.shape.size() != 2)
    throw FormatError("mask tensor must be c128 with shape [frames, bins]: " +
                      path);
  if (t.shape[0] != num_frames || t.shape[1] != num_bins)
    throw ShapeError("mask tensor shape mismatch in " + path);
  ComplexMask mask(num_frames, num_bins);
  mask.values = std::move(t.complex_data);
  return mask;
}

// target (and optionally noise) masks for the requested source
std::pair<ComplexMask, ComplexMask> acquire_masks(
    const PipelineConfig &config, const Manifest &manifest,
    const UtteranceEntry &utt, MaskSource source,
    const ComplexSpectrogram &spec, const std::string &tensor_dir,
    bool need_noise) {
  const StftConfig cfg = config.stft_config();
  const size_t ref = config.geometry.reference_index;
  switch (source) {
    case MaskSource::kOracle: {
      ComplexSpectrogram mix_ref = spec.channel(ref);
      MultiChannelWaveform target_stem =
          read_wav(manifest.resolve(utt.target_stem_path));
      ComplexSpectrogram target_ref =
          stft(mono_channel(target_stem, std::min(ref, target_stem.num_channels - 1)),
               cfg);
      ComplexMask mask_t = oracle_crm(target_ref, mix_ref, config.mask_bound);
      ComplexMask mask_n;
      if (need_noise) {
        MultiChannelWaveform noise_stem =
            read_wav(manifest.resolve(utt.interferer_stem_path));
        ComplexSpectrogram noise_ref = stft(
            mono_channel(noise_stem, std::min(ref, noise_stem.num_channels - 1)),
            cfg);
        mask_n = oracle_crm(noise_ref, mix_ref, config.mask_bound);
      }
      return {std::move(mask_t), std::move(mask_n)};
    }
    case MaskSource::kAfHeuristic: {
      SteeringVector steering =
          steering_vector(config.geometry, utt.doa_deg, cfg,
                          config.sample_rate, config.speed_of_sound);
      FeatureMatrix af = angle_feature(spec, steering, config.pairs);
      auto [mask_t, mask_n] = af_heuristic_masks(af, config.af_threshold);
      if (!need_noise) mask_n = ComplexMask();
      return {std::move(mask_t), std::move(mask_n)};
    }
    case MaskSource::kFile: {
      fs::path dir = tensor_dir.empty() ? fs::path(manifest.root) / "masks"
                                        : fs::path(tensor_dir);
      ComplexMask mask_t =
          mask_from_tensor((dir / (utt.id + ".target.tensor")).string(),
                           spec.num_frames, spec.num_bins);
      ComplexMask mask_n;
      if (need_noise)
        mask_n = mask_from_tensor((dir / (utt.id + ".noise.tensor")).string(),
                                  spec.num_frames, spec.num_bins);
      return {std::move(mask_t), std::move(mask_n)};
    }
  }
  throw ConfigError("unhandled mask source");
}

BeamformerWeights mvdr_weights_for(const PipelineConfig &config,
                                   const ComplexSpectrogram &spec,
                                   const ComplexMask &mask_target,
                                   const ComplexMask &mask_noise) {
  PsdSet psd_speech = estimate_psd(spec, mask_target);
  PsdSet psd_noise = estimate_psd(spec, mask_noise);
  const size_t ref = config.geometry.reference_index;
  const size_t C = psd_speech.num_channels;

  // Bins where a mask assigned (next to) no energy carry no usable
  // statistics — binary heuristic masks regularly leave such holes. Patch
  // them to identities for the solve, then pass the reference channel
  // through unchanged at those bins.
  std::vector<size_t> holes;
  for (size_t f = 0; f < psd_speech.num_bins; ++f) {
    if (!psd_speech.degenerate_bin[f] && !psd_noise.degenerate_bin[f]) continue;
    holes.push_back(f);
    for (size_t r = 0; r < C; ++r)
      for (size_t c = 0; c < C; ++c) {
        psd_speech.at(f, r, c) = r == c ? 1.0 : 0.0;
        psd_noise.at(f, r, c) = r == c ? 1.0 : 0.0;
      }
  }
  BeamformerWeights w = mvdr_from_psd(psd_speech, psd_noise, ref,
                                      config.diagonal_loading);
  for (size_t f : holes) {
    for (size_t c = 0; c < C; ++c) w.ti_at(f, c) = c == ref ? 1.0 : 0.0;
  }
  return w;
}

BeamformerWeights filters_from_tensor(const std::string &path, size_t frames,
                                      size_t bins, size_t channels) {
  Tensor t = read_tensor(path);
  if (!t.is_complex || t.shape.size() != 3)
    throw FormatError(
        "filter tensor must be c128 with shape [frames, bins, channels]: " +
        path);
  if (t.shape[0] != frames || t.shape[1] != bins || t.shape[2] != channels)
    throw ShapeError("filter tensor shape mismatch in " + path);
  BeamformerWeights w;
  w.kind = WeightKind::kTimeVariant;
  w.num_frames = frames;
  w.num_bins = bins;
  w.num_channels = channels;
  w.values = std::move(t.complex_data);
  return w;
}

}  // namespace

MultiChannelWaveform separate_utterance(const PipelineConfig &config,
                                        const Manifest &manifest,
                                        const UtteranceEntry &utt,
                                        SeparationMethod method,
                                        MaskSource mask_source,
                                        const std::string &tensor_dir) {
  const StftConfig cfg = config.stft_config();
  MultiChannelWaveform mixture = read_wav(manifest.resolve(utt.mixture_path));
  if (mixture.num_channels != config.geometry.num_channels())
    throw ShapeError("mixture has " + std::to_string(mixture.num_channels) +
                     " channels, geometry expects " +
                     std::to_string(config.geometry.num_channels()));
  ComplexSpectrogram spec = stft(mixture, cfg);

  ComplexSpectrogram out;
  switch (method) {
    case SeparationMethod::kTfMask: {
      auto [mask_t, mask_n] = acquire_masks(config, manifest, utt, mask_source,
                                            spec, tensor_dir, false);
      (void)mask_n;
      out = apply_mask(mask_t, spec.channel(config.geometry.reference_index));
      break;
    }
    case SeparationMethod::kMvdr: {
      auto [mask_t, mask_n] = acquire_masks(config, manifest, utt, mask_source,
                                            spec, tensor_dir, true);
      BeamformerWeights w = mvdr_weights_for(config, spec, mask_t, mask_n);
      out = apply_weights(w, spec);
      break;
    }
    case SeparationMethod::kDelaySum: {
      // needs only the DOA: no stems, no masks
      SteeringVector steering =
          steering_vector(config.geometry, utt.doa_deg, cfg,
                          config.sample_rate, config.speed_of_sound);
      out = apply_weights(delay_and_sum(steering), spec);
      break;
    }
    case SeparationMethod::kFilterSum: {
      BeamformerWeights tv;
      if (mask_source == MaskSource::kFile) {
        fs::path dir = tensor_dir.empty() ? fs::path(manifest.root) / "masks"
                                          : fs::path(tensor_dir);
        tv = filters_from_tensor((dir / (utt.id + ".filters.tensor")).string(),
                                 spec.num_frames, spec.num_bins,
                                 spec.num_channels);
        tv.reference_index = config.geometry.reference_index;
      } else {
        // fall back to broadcasting the per-utterance MVDR solution
        auto [mask_t, mask_n] = acquire_masks(config, manifest, utt,
                                              mask_source, spec, tensor_dir,
                                              true);
        BeamformerWeights ti = mvdr_weights_for(config, spec, mask_t, mask_n);
        tv = broadcast_time_variant(ti, spec.num_frames);
      }
      out = apply_weights(tv, spec);
      break;
    }
  }
  return istft(out, cfg, mixture.num_samples);
}

SeparateRunSummary run_separate(const SeparateOptions &opts) {
  opts.config.validate();
  if (opts.out_dir.empty()) throw ConfigError("separate: out_dir is required");
  Manifest manifest = read_manifest(opts.manifest_path);

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) throw IoError("cannot create " + opts.out_dir + ": " + ec.message());

  struct UttLog {
    bool ok = false;
    std::string error;
    double seconds = 0.0;
  };
  std::vector<UttLog> logs(manifest.utterances.size());

  parallel_for(manifest.utterances.size(), opts.jobs, [&](size_t u) {
    const UtteranceEntry &utt = manifest.utterances[u];
    auto t0 = std::chrono::steady_clock::now();
    try {
      MultiChannelWaveform out =
          separate_utterance(opts.config, manifest, utt, opts.method,
                             opts.mask_source, opts.tensor_dir);
      write_wav((fs::path(opts.out_dir) / (utt.id + ".wav")).string(), out);
      logs[u].ok = true;
    } catch (const std::exception &e) {
      logs[u].ok = false;
      logs[u].error = e.what();
    }
    logs[u].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  });

  nlohmann::json j;
  j["schema_version"] = 1;
  j["config_fingerprint"] = opts.config.fingerprint();
  j["method"] = method_name(opts.method);
  j["mask_source"] = mask_source_name(opts.mask_source);
  nlohmann::json utts = nlohmann::json::array();
  SeparateRunSummary summary;
  for (size_t u = 0; u < logs.size(); ++u) {
    nlohmann::json e;
    e["id"] = manifest.utterances[u].id;
    e["ok"] = logs[u].ok;
    if (!logs[u].error.empty()) e["error"] = logs[u].error;
    e["seconds"] = logs[u].seconds;
    utts.push_back(e);
    if (logs[u].ok)
      ++summary.num_ok;
    else
      ++summary.num_failed;
  }
  j["utterances"] = utts;

  summary.log_path = (fs::path(opts.out_dir) / "run_log.json").string();
  std::ofstream log(summary.log_path, std::ios::trunc);
  if (!log) throw IoError("cannot write " + summary.log_path);
  log << j.dump(2) << "\n";
  return summary;
}

EvalReport run_evaluate(const EvaluateOptions &opts) {
  Manifest manifest = read_manifest(opts.manifest_path);

  EvalReport report;
  report.config_fingerprint = manifest.config_fingerprint;
  report.method = "unknown";
  {
    // the separation run log, when present, names the method under test
    std::ifstream log(
        (fs::path(opts.separated_dir) / "run_log.json").string());
    if (log) {
      try {
        nlohmann::json j = nlohmann::json::parse(log);
        report.method = j.at("method").get<std::string>() + "," +
                        j.at("mask_source").get<std::string>();
      } catch (const nlohmann::json::exception &) {
        // leave "unknown"
      }
    }
  }

  const size_t ref = opts.config.geometry.reference_index;
  report.utterances.resize(manifest.utterances.size());

  parallel_for(manifest.utterances.size(), opts.jobs, [&](size_t u) {
    const UtteranceEntry &utt = manifest.utterances[u];
    UtteranceScore &score = report.utterances[u];
    score.id = utt.id;
    try {
      MultiChannelWaveform mixture =
          read_wav(manifest.resolve(utt.mixture_path));
      MultiChannelWaveform stem =
          read_wav(manifest.resolve(utt.target_stem_path));
      MultiChannelWaveform separated = read_wav(
          (fs::path(opts.separated_dir) / (utt.id + ".wav")).string());
      MultiChannelWaveform mix_ref =
          mono_channel(mixture, std::min(ref, mixture.num_channels - 1));
      MultiChannelWaveform stem_ref =
          mono_channel(stem, std::min(ref, stem.num_channels - 1));
      MultiChannelWaveform sep_ref =
          mono_channel(separated, std::min(ref, separated.num_channels - 1));
      score.si_snr_in = si_snr(mix_ref, stem_ref).value_db;
      score.si_snr_out = si_snr(sep_ref, stem_ref).value_db;
      score.delta = score.si_snr_out - score.si_snr_in;
      score.ok = true;
    } catch (const std::exception &e) {
      score.ok = false;
      score.error = e.what();
    }
  });

  report.finalize();
  if (!opts.report_path.empty()) {
    std::ofstream out(opts.report_path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + opts.report_path);
    out << report_to_json(report);
  }
  return report;
}

void run_features(const FeaturesOptions &opts) {
  opts.config.validate();
  if (opts.out_dir.empty()) throw ConfigError("features: out_dir is required");
  Manifest manifest = read_manifest(opts.manifest_path);

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) throw IoError("cannot create " + opts.out_dir + ": " + ec.message());

  const PipelineConfig &config = opts.config;
  const StftConfig cfg = config.stft_config();

  parallel_for(manifest.utterances.size(), opts.jobs, [&](size_t u) {
    const UtteranceEntry &utt = manifest.utterances[u];
    MultiChannelWaveform mixture = read_wav(manifest.resolve(utt.mixture_path));
    ComplexSpectrogram spec = stft(mixture, cfg);
    SteeringVector steering =
        steering_vector(config.geometry, utt.doa_deg, cfg, config.sample_rate,
                        config.speed_of_sound);
    fs::path dir(opts.out_dir);

    if (opts.write_steering) {
      Tensor t;
      t.shape = {steering.num_channels, steering.num_bins};
      t.is_complex = true;
      t.complex_data = steering.values;
      write_tensor((dir / (utt.id + ".steering.tensor")).string(), t);
    }
    if (opts.write_ipd) {
      FeatureMatrix f = ipd(spec, config.pairs);
      Tensor t;
      t.shape = {f.num_pairs, f.num_frames, f.num_bins};
      t.is_complex = false;
      t.real_data = f.values;
      write_tensor((dir / (utt.id + ".ipd.tensor")).string(), t);
    }
    if (opts.write_af) {
      FeatureMatrix f = angle_feature(spec, steering, config.pairs);
      Tensor t;
      t.shape = {f.num_frames, f.num_bins};
      t.is_complex = false;
      t.real_data = f.values;
      write_tensor((dir / (utt.id + ".af.tensor")).string(), t);
    }
  });
}

}  // namespace beamsep
