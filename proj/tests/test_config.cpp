// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cctype>
#include <filesystem>
#include <fstream>
#include <string>

#include "beamsep/config.hpp"
#include "beamsep/manifest.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace beamsep;

namespace {

std::string tmp_path(const std::string &name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void spit(const std::string &path, const std::string &bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Manifest tiny_manifest() {
  Manifest m;
  m.master_seed = 7;
  m.config_fingerprint = "deadbeef00000000";
  for (int i = 0; i < 2; ++i) {
    UtteranceEntry u;
    u.id = "utt" + std::to_string(i);
    u.scene.room.dimensions = {6.0, 5.0, 3.0};
    u.scene.room.t60 = 0.25;
    u.scene.array_center = {3.0, 2.5, 1.5};
    u.scene.array_orientation_rad = 0.4;
    u.scene.target_position = {4.0, 3.0, 1.6};
    u.scene.interferer_position = {1.5, 1.5, 1.4};
    u.scene.target_doa_deg = 61.25;
    u.scene.sir_db = i == 0 ? 0.0 : -6.0;
    u.scene.overlap_ratio = 0.8;
    u.scene.seed = 1000 + static_cast<uint64_t>(i);
    u.doa_deg = u.scene.target_doa_deg;
    u.mixture_path = "wavs/" + u.id + "_mixture.wav";
    u.target_stem_path = "wavs/" + u.id + "_target.wav";
    u.interferer_stem_path = "wavs/" + u.id + "_interferer.wav";
    m.utterances.push_back(u);
  }
  return m;
}

}  // namespace

TEST_CASE("default config validates and fingerprints stably") {
  PipelineConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.geometry.num_channels() == 15);
  CHECK(c.pairs.size() == 9);

  const std::string fp = c.fingerprint();
  CHECK(fp.size() == 16);
  for (char ch : fp) CHECK(std::isxdigit(static_cast<unsigned char>(ch)));
  CHECK(fp == c.fingerprint());
  CHECK(fp == PipelineConfig().fingerprint());
  CHECK(fp == PipelineConfig::from_json_text("{}").fingerprint());

  // semantic change moves the fingerprint
  PipelineConfig other;
  other.hop_length = 128;
  CHECK(other.fingerprint() != fp);
  PipelineConfig seeded;
  seeded.seed = 1;
  CHECK(seeded.fingerprint() != fp);

  const auto j = nlohmann::json::parse(c.to_canonical_json());
  CHECK(j.at("fft_size") == 512);
  CHECK(j.at("geometry").at("mic_positions_relative").size() == 15);
  CHECK(c.to_canonical_json().back() == '\n');
}

TEST_CASE("partial overrides keep the remaining defaults") {
  const PipelineConfig c = PipelineConfig::from_json_text(
      R"({"seed": 42, "hop_length": 128, "ranges": {"t60_max": 0.5}})");
  CHECK(c.seed == 42);
  CHECK(c.hop_length == 128);
  CHECK(c.ranges.t60_max == 0.5);
  CHECK(c.ranges.t60_min == PipelineConfig().ranges.t60_min);
  CHECK(c.fft_size == 512);
  CHECK(c.geometry.num_channels() == 15);
}

TEST_CASE("unknown config keys are rejected with their scope") {
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json_text(R"({"bogus": 1})"),
                       "unknown config key: bogus", ConfigError);
  CHECK_THROWS_WITH_AS(
      PipelineConfig::from_json_text(R"({"geometry": {"bogus": 1}})"),
      "unknown config key: geometry.bogus", ConfigError);
  CHECK_THROWS_WITH_AS(
      PipelineConfig::from_json_text(R"({"ranges": {"nope": 1}})"),
      "unknown config key: ranges.nope", ConfigError);
}

TEST_CASE("malformed config text is rejected") {
  CHECK_THROWS_AS(PipelineConfig::from_json_text("not json"), ConfigError);
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json_text("[1, 2]"),
                       "config root must be a JSON object", ConfigError);
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json_text(R"({"pairs": [[0]]})"),
                       "each pair must be a 2-element array", ConfigError);
  CHECK_THROWS_AS(PipelineConfig::from_json_text(
                      R"({"geometry": {"mic_positions_relative": [[0, 0]]}})"),
                  ConfigError);
}

TEST_CASE("config validation rejects invalid values") {
  CHECK_THROWS_AS(PipelineConfig::from_json_text(R"({"fft_size": 0})"),
                  ConfigError);
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json_text(R"({"sample_rate": -1})"),
                       "sample_rate must be positive", ConfigError);
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json_text(R"({"af_threshold": 1.5})"),
                       "af_threshold must be in [-1, 1]", ConfigError);
  CHECK_THROWS_WITH_AS(
      PipelineConfig::from_json_text(R"({"diagonal_loading": -1e-9})"),
      "diagonal_loading must be >= 0", ConfigError);
  CHECK_THROWS_WITH_AS(
      PipelineConfig::from_json_text(R"({"source_duration_s": 0})"),
      "source_duration_s must be positive", ConfigError);
  // hop that does not divide the window violates overlap-add
  CHECK_THROWS_AS(PipelineConfig::from_json_text(R"({"hop_length": 200})"),
                  ConfigError);
  // geometry and pair problems surface through validate too
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json_text(
                           R"({"geometry": {"reference_index": 99}})"),
                       "reference_index out of range", ConfigError);
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json_text(R"({"pairs": [[0, 40]]})"),
                       "pair index out of range", ConfigError);
}

TEST_CASE("config save/load round trip preserves the fingerprint") {
  PipelineConfig c;
  c.seed = 99;
  c.ranges.t60_max = 0.55;
  c.af_threshold = 0.25;
  const std::string path = tmp_path("beamsep_config.json");
  c.save(path);
  const PipelineConfig back = PipelineConfig::load(path);
  CHECK(back.seed == 99);
  CHECK(back.ranges.t60_max == 0.55);
  CHECK(back.af_threshold == 0.25);
  CHECK(back.fingerprint() == c.fingerprint());

  CHECK_THROWS_AS(PipelineConfig::load(tmp_path("beamsep_no_config.json")),
                  IoError);
}

TEST_CASE("manifest write/read round trip preserves every field") {
  const Manifest m = tiny_manifest();
  const std::string path = tmp_path("beamsep_manifest.json");
  write_manifest(m, path);
  const Manifest back = read_manifest(path);

  CHECK(back.schema_version == 1);
  CHECK(back.master_seed == 7);
  CHECK(back.config_fingerprint == "deadbeef00000000");
  REQUIRE(back.utterances.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    const UtteranceEntry &a = m.utterances[i];
    const UtteranceEntry &b = back.utterances[i];
    CHECK(b.id == a.id);
    CHECK(b.doa_deg == a.doa_deg);
    CHECK(b.mixture_path == a.mixture_path);
    CHECK(b.target_stem_path == a.target_stem_path);
    CHECK(b.interferer_stem_path == a.interferer_stem_path);
    CHECK(b.scene.room.dimensions[0] == a.scene.room.dimensions[0]);
    CHECK(b.scene.room.t60 == a.scene.room.t60);
    CHECK(b.scene.room.speed_of_sound == a.scene.room.speed_of_sound);
    CHECK(b.scene.array_center[2] == a.scene.array_center[2]);
    CHECK(b.scene.array_orientation_rad == a.scene.array_orientation_rad);
    CHECK(b.scene.target_position[1] == a.scene.target_position[1]);
    CHECK(b.scene.interferer_position[0] == a.scene.interferer_position[0]);
    CHECK(b.scene.target_doa_deg == a.scene.target_doa_deg);
    CHECK(b.scene.sir_db == a.scene.sir_db);
    CHECK(b.scene.overlap_ratio == a.scene.overlap_ratio);
    CHECK(b.scene.seed == a.scene.seed);
  }

  // paths resolve against the manifest directory
  const std::string dir = std::filesystem::path(path).parent_path().string();
  CHECK(back.root == dir);
  CHECK(back.resolve("wavs/utt0_mixture.wav") ==
        (std::filesystem::path(dir) / "wavs/utt0_mixture.wav").string());
  CHECK(back.resolve("/abs/path.wav") == "/abs/path.wav");
  CHECK(back.resolve("") == "");
}

TEST_CASE("manifest reader is strict") {
  const std::string path = tmp_path("beamsep_manifest_bad.json");
  write_manifest(tiny_manifest(), tmp_path("beamsep_manifest_ok.json"));
  const std::string good = slurp(tmp_path("beamsep_manifest_ok.json"));

  CHECK_THROWS_AS(read_manifest(tmp_path("beamsep_no_manifest.json")), IoError);

  SUBCASE("not json") {
    spit(path, "nonsense");
    CHECK_THROWS_AS(read_manifest(path), FormatError);
  }
  SUBCASE("root not an object") {
    spit(path, "[]\n");
    CHECK_THROWS_WITH_AS(read_manifest(path),
                         "manifest root must be a JSON object", FormatError);
  }
  SUBCASE("unknown root key") {
    auto j = nlohmann::json::parse(good);
    j["bogus"] = 1;
    spit(path, j.dump());
    CHECK_THROWS_WITH_AS(read_manifest(path), "manifest: unknown key bogus",
                         FormatError);
  }
  SUBCASE("unknown utterance key") {
    auto j = nlohmann::json::parse(good);
    j["utterances"][0]["extra"] = 1;
    spit(path, j.dump());
    CHECK_THROWS_WITH_AS(read_manifest(path),
                         "manifest: unknown key utterances[].extra",
                         FormatError);
  }
  SUBCASE("unknown scene key") {
    auto j = nlohmann::json::parse(good);
    j["utterances"][1]["scene"]["warp"] = 0.5;
    spit(path, j.dump());
    CHECK_THROWS_WITH_AS(read_manifest(path),
                         "manifest: unknown key utterances[].scene.warp",
                         FormatError);
  }
  SUBCASE("unsupported schema version") {
    auto j = nlohmann::json::parse(good);
    j["schema_version"] = 2;
    spit(path, j.dump());
    CHECK_THROWS_WITH_AS(read_manifest(path),
                         "unsupported manifest schema_version 2", FormatError);
  }
  SUBCASE("missing required key") {
    auto j = nlohmann::json::parse(good);
    j.erase("master_seed");
    spit(path, j.dump());
    CHECK_THROWS_WITH_AS(read_manifest(path), "manifest: missing key master_seed",
                         FormatError);
  }
  SUBCASE("utterances must be an array") {
    auto j = nlohmann::json::parse(good);
    j["utterances"] = 3;
    spit(path, j.dump());
    CHECK_THROWS_WITH_AS(read_manifest(path),
                         "manifest: utterances must be an array", FormatError);
  }
  SUBCASE("bad position shape inside a scene") {
    auto j = nlohmann::json::parse(good);
    j["utterances"][0]["scene"]["array_center"] = {1.0, 2.0};
    spit(path, j.dump());
    CHECK_THROWS_AS(read_manifest(path), FormatError);
  }
}
