// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/room.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beamsep/stft.hpp"

namespace beamsep {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kSincTaps = 81;
constexpr int kSincHalf = kSincTaps / 2;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

// one image per lattice cell: distance and reflection order
struct Image {
  double dist;
  int order;
};

std::vector<Image> enumerate_images(const RoomSpec &room, const Vec3 &src,
                                    const Vec3 &mic, int max_order) {
  std::vector<Image> images;
  const int nlim = max_order / 2 + 1;
  const double lx = room.dimensions[0];
  const double ly = room.dimensions[1];
  const double lz = room.dimensions[2];
  for (int mx = -nlim; mx <= nlim; ++mx)
    for (int q = 0; q <= 1; ++q) {
      const int ox = std::abs(2 * mx - q);
      if (ox > max_order) continue;
      const double ix = (1 - 2 * q) * src[0] + 2.0 * mx * lx;
      for (int my = -nlim; my <= nlim; ++my)
        for (int j = 0; j <= 1; ++j) {
          const int oy = ox + std::abs(2 * my - j);
          if (oy > max_order) continue;
          const double iy = (1 - 2 * j) * src[1] + 2.0 * my * ly;
          for (int mz = -nlim; mz <= nlim; ++mz)
            for (int k = 0; k <= 1; ++k) {
              const int order = oy + std::abs(2 * mz - k);
              if (order > max_order) continue;
              const double iz = (1 - 2 * k) * src[2] + 2.0 * mz * lz;
              const double dx = ix - mic[0];
              const double dy = iy - mic[1];
              const double dz = iz - mic[2];
              images.push_back(
                  {std::sqrt(dx * dx + dy * dy + dz * dz), order});
            }
        }
    }
  return images;
}

// T60 from an energy-decay curve sampled at dt; fit depth auto-selected
// (-35, then -25, then -15 dB floor, always from -5 dB)
std::optional<double> t60_from_edc(const std::vector<double> &edc_db, double dt) {
  for (const double floor_db : {-35.0, -25.0, -15.0}) {
    size_t i0 = edc_db.size(), i1 = edc_db.size();
    for (size_t i = 0; i < edc_db.size(); ++i) {
      if (i0 == edc_db.size() && edc_db[i] <= -5.0) i0 = i;
      if (edc_db[i] <= floor_db) {
        i1 = i;
        break;
      }
    }
    if (i0 >= i1 || i1 == edc_db.size()) continue;
    // least squares line over [i0, i1)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(i1 - i0);
    for (size_t i = i0; i < i1; ++i) {
      const double x = static_cast<double>(i) * dt;
      sx += x;
      sy += edc_db[i];
      sxx += x * x;
      sxy += x * edc_db[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) continue;
    const double slope = (n * sxy - sx * sy) / denom;
    if (slope >= 0.0) continue;
    return -60.0 / slope;
  }
  return std::nullopt;
}

// analytic Schroeder prediction from per-order energy-vs-time curves,
// evaluated for a candidate beta without rendering any taps
struct OrderEnergyCurves {
  double dt = 1e-3;
  size_t bins = 0;
  std::vector<std::vector<double>> remaining;  // [order][bin], tail sums
};

OrderEnergyCurves build_curves(const std::vector<Image> &images, double c) {
  OrderEnergyCurves curves;
  double tmax = 0.0;
  int max_order = 0;
  for (const Image &im : images) {
    tmax = std::max(tmax, im.dist / c);
    max_order = std::max(max_order, im.order);
  }
  curves.bins = static_cast<size_t>(tmax / curves.dt) + 2;
  curves.remaining.assign(static_cast<size_t>(max_order) + 1,
                          std::vector<double>(curves.bins, 0.0));
  for (const Image &im : images) {
    const size_t b = static_cast<size_t>(im.dist / c / curves.dt);
    const double amp = 1.0 / (4.0 * kPi * im.dist);
    curves.remaining[static_cast<size_t>(im.order)][b] += amp * amp;
  }
  for (auto &row : curves.remaining)
    for (size_t i = row.size() - 1; i-- > 0;) row[i] += row[i + 1];
  return curves;
}

std::optional<double> predicted_t60(const OrderEnergyCurves &curves,
                                    double beta) {
  std::vector<double> edc(curves.bins, 0.0);
  double w = 1.0;
  for (const auto &row : curves.remaining) {
    for (size_t i = 0; i < curves.bins; ++i) edc[i] += w * row[i];
    w *= beta * beta;
  }
  if (edc[0] <= 0.0) return std::nullopt;
  std::vector<double> db(curves.bins);
  for (size_t i = 0; i < curves.bins; ++i)
    db[i] = 10.0 * std::log10(std::max(edc[i] / edc[0], 1e-30));
  return t60_from_edc(db, curves.dt);
}

ImpulseResponse render_images(const std::vector<Image> &images, double refl,
                              double c, int sample_rate) {
  double max_delay = 0.0;
  for (const Image &im : images)
    max_delay = std::max(max_delay, im.dist / c * sample_rate);
  const size_t n_samples =
      static_cast<size_t>(std::ceil(max_delay)) + kSincHalf + 2;

  ImpulseResponse ir;
  ir.sample_rate = sample_rate;
  ir.taps.assign(n_samples, 0.0);

  for (const Image &im : images) {
    const double delay = im.dist / c * sample_rate;
    double amp = 1.0 / (4.0 * kPi * im.dist);
    for (int o = 0; o < im.order; ++o) amp *= refl;
    const int center = static_cast<int>(std::lround(delay));
    for (int k = -kSincHalf; k <= kSincHalf; ++k) {
      const int n = center + k;
      if (n < 0 || n >= static_cast<int>(n_samples)) continue;
      const double t = static_cast<double>(n) - delay;
      // Hann-windowed sinc, window support +-(half + 0.5) samples
      const double w =
          0.5 * (1.0 + std::cos(kPi * t / (kSincHalf + 0.5)));
      ir.taps[static_cast<size_t>(n)] += amp * w * sinc(t);
    }
  }
  return ir;
}

void check_positions(const RoomSpec &room, const Vec3 &source, const Vec3 &mic) {
  for (int a = 0; a < 3; ++a) {
    if (source[a] <= 0.0 || source[a] >= room.dimensions[a])
      throw DomainError("source position outside room");
    if (mic[a] <= 0.0 || mic[a] >= room.dimensions[a])
      throw DomainError("mic position outside room");
  }
  if (norm(source - mic) < 1e-3)
    throw DomainError("source and mic positions coincide");
}

}  // namespace

void RoomSpec::validate() const {
  for (int a = 0; a < 3; ++a)
    if (dimensions[a] <= 0.0) throw DomainError("room dimensions must be positive");
  if (t60 < 0.0) throw DomainError("t60 must be non-negative");
  if (speed_of_sound <= 0.0) throw DomainError("speed of sound must be positive");
  if (t60 > 0.0 && sabine_absorption() > 1.0)
    throw DomainError(
        "t60 " + std::to_string(t60) +
        " s is incompatible with the room (Sabine absorption > 1); "
        "use a larger room or a smaller t60");
}

int default_max_order(const RoomSpec &room) {
  if (room.t60 <= 0.0) return 0;
  const double min_dim = std::min(
      {room.dimensions[0], room.dimensions[1], room.dimensions[2]});
  const int order =
      static_cast<int>(std::ceil(room.t60 * room.speed_of_sound / min_dim));
  return std::min(order, 30);
}

double wall_reflection(const RoomSpec &room) {
  room.validate();
  if (room.t60 <= 0.0) return 0.0;
  // Closed-form inversions miss the Schroeder fit by well over 20% at the
  // edges of the supported range: beta^2 = 1 - alpha_sabine decays too fast
  // once absorption is no longer small, and the Eyring form
  // beta^2 = exp(-alpha_sabine) overshoots for flat rooms whose tangential
  // image families decay below the diffuse rate. So bisect beta against the
  // analytic energy-decay curve of the image set itself, enumerated deep
  // enough (order ~ t60 * c / min dimension) that the full 60 dB of decay
  // is represented. Canonical source/mic near the room center; the decay
  // slope is insensitive to the exact positions.
  const double min_dim = std::min(
      {room.dimensions[0], room.dimensions[1], room.dimensions[2]});
  const int order = std::min(
      static_cast<int>(std::ceil(room.t60 * room.speed_of_sound / min_dim)),
      120);
  const Vec3 mic = {0.5 * room.dimensions[0], 0.5 * room.dimensions[1],
                    0.5 * room.dimensions[2]};
  const Vec3 src = {0.35 * room.dimensions[0], 0.42 * room.dimensions[1],
                    0.47 * room.dimensions[2]};
  const OrderEnergyCurves curves =
      build_curves(enumerate_images(room, src, mic, order),
                   room.speed_of_sound);
  double lo = 0.02, hi = 0.9999;
  for (int iter = 0; iter < 45; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const std::optional<double> t = predicted_t60(curves, mid);
    if (!t.has_value() || *t < room.t60)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ImpulseResponse simulate_rir_with_beta(const RoomSpec &room, const Vec3 &source,
                                       const Vec3 &mic, int max_order,
                                       double beta, int sample_rate) {
  room.validate();
  check_positions(room, source, mic);
  if (room.t60 <= 0.0) max_order = 0;
  const std::vector<Image> images =
      enumerate_images(room, source, mic, max_order);
  return render_images(images, -beta, room.speed_of_sound, sample_rate);
}

ImpulseResponse simulate_rir(const RoomSpec &room, const Vec3 &source,
                             const Vec3 &mic, int max_order, int sample_rate) {
  room.validate();
  check_positions(room, source, mic);
  if (room.t60 <= 0.0 || max_order == 0)
    return simulate_rir_with_beta(room, source, mic, 0, 0.0, sample_rate);
  return simulate_rir_with_beta(room, source, mic, max_order,
                                wall_reflection(room), sample_rate);
}

std::optional<double> schroeder_t60(const std::vector<double> &taps,
                                    int sample_rate) {
  if (taps.empty()) return std::nullopt;
  std::vector<double> edc(taps.size());
  double acc = 0.0;
  for (size_t i = taps.size(); i-- > 0;) {
    acc += taps[i] * taps[i];
    edc[i] = acc;
  }
  if (edc[0] <= 0.0) return std::nullopt;
  std::vector<double> db(taps.size());
  for (size_t i = 0; i < taps.size(); ++i)
    db[i] = 10.0 * std::log10(std::max(edc[i] / edc[0], 1e-30));
  return t60_from_edc(db, 1.0 / static_cast<double>(sample_rate));
}

void SceneRanges::validate() const {
  for (int a = 0; a < 3; ++a)
    if (room_min[a] <= 0.0 || room_max[a] < room_min[a])
      throw ConfigError("invalid room dimension ranges");
  if (t60_min < 0.0 || t60_max < t60_min)
    throw ConfigError("invalid t60 range");
  if (sir_choices_db.empty()) throw ConfigError("empty SIR choice list");
  if (overlap_min < 0.0 || overlap_max > 1.0 || overlap_max < overlap_min)
    throw ConfigError("invalid overlap range");
  if (distance_min <= 0.0 || distance_max < distance_min)
    throw ConfigError("invalid distance range");
  if (wall_margin < 0.0) throw ConfigError("invalid wall margin");
}

SceneSpec sample_scene(Rng &rng, const SceneRanges &ranges) {
  ranges.validate();
  SceneSpec scene;

  scene.room.dimensions = {rng.uniform(ranges.room_min[0], ranges.room_max[0]),
                           rng.uniform(ranges.room_min[1], ranges.room_max[1]),
                           rng.uniform(ranges.room_min[2], ranges.room_max[2])};
  // resample t60 until the room can physically provide it
  for (int tries = 0;; ++tries) {
    scene.room.t60 = rng.uniform(ranges.t60_min, ranges.t60_max);
    if (scene.room.sabine_absorption() <= 0.95) break;
    if (tries > 10000)
      throw ConfigError("t60 range incompatible with room dimension range");
  }

  const Vec3 dims = scene.room.dimensions;
  // array center in the middle band of the room so the array plus the
  // source ring has space; the default array spans 0.72 m
  const double margin = ranges.wall_margin;
  for (int a = 0; a < 3; ++a) {
    const double lo = 0.35 * dims[a];
    const double hi = 0.65 * dims[a];
    scene.array_center[a] = rng.uniform(lo, hi);
  }
  scene.array_orientation_rad = rng.uniform(0.0, kPi);

  auto sample_source = [&](void) -> Vec3 {
    for (int tries = 0; tries < 10000; ++tries) {
      const double d = rng.uniform(ranges.distance_min, ranges.distance_max);
      const double az = rng.uniform(0.0, 2.0 * kPi);
      // z offset limited so the source stays at speaking height-ish
      const double cos_el = rng.uniform(-0.35, 0.35);
      const double sin_el = std::sqrt(1.0 - cos_el * cos_el);
      const Vec3 p = {scene.array_center[0] + d * sin_el * std::cos(az),
                      scene.array_center[1] + d * sin_el * std::sin(az),
                      scene.array_center[2] + d * cos_el};
      bool ok = true;
      for (int a = 0; a < 3; ++a)
        if (p[a] < margin || p[a] > dims[a] - margin) ok = false;
      if (ok) return p;
    }
    throw ConfigError("cannot place a source in the sampled room");
  };
  scene.target_position = sample_source();
  scene.interferer_position = sample_source();

  // target DOA relative to the array axis, measured at the centroid.
  // Stored as the angle between the axis and the incoming propagation
  // direction (array <- source), so exp(-j 2 pi f d cos(theta) / c) with a
  // positive axis offset d reproduces the rendered inter-mic delays: a
  // source off the positive axis end reaches the far mics earlier.
  const Vec3 axis = {std::cos(scene.array_orientation_rad),
                     std::sin(scene.array_orientation_rad), 0.0};
  const Vec3 to_target = scene.target_position - scene.array_center;
  const double cos_doa = -dot(axis, to_target) / norm(to_target);
  scene.target_doa_deg =
      std::acos(std::clamp(cos_doa, -1.0, 1.0)) * 180.0 / kPi;

  scene.sir_db = rng.choice(ranges.sir_choices_db);
  scene.overlap_ratio = rng.uniform(ranges.overlap_min, ranges.overlap_max);
  scene.seed = rng.next_u64();
  return scene;
}

std::vector<Vec3> scene_mic_positions(const SceneSpec &scene,
                                      const ArrayGeometry &geometry) {
  const double cs = std::cos(scene.array_orientation_rad);
  const double sn = std::sin(scene.array_orientation_rad);
  std::vector<Vec3> mics;
  mics.reserve(geometry.num_channels());
  for (const Vec3 &p : geometry.mic_positions_relative) {
    const Vec3 rotated = {p[0] * cs - p[1] * sn, p[0] * sn + p[1] * cs, p[2]};
    mics.push_back(scene.array_center + rotated);
  }
  return mics;
}

MixtureBundle synthesize_mixture(const SceneSpec &scene,
                                 const MultiChannelWaveform &target,
                                 const MultiChannelWaveform &interferer,
                                 const ArrayGeometry &geometry,
                                 size_t hop_length) {
  if (target.num_channels != 1 || interferer.num_channels != 1)
    throw ShapeError("sources must be mono");
  if (target.sample_rate != interferer.sample_rate)
    throw ShapeError("source sample rates differ");
  geometry.validate();
  const int fs = target.sample_rate;
  const size_t R = geometry.num_channels();
  const std::vector<Vec3> mics = scene_mic_positions(scene, geometry);

  const size_t lt = target.num_samples;
  const size_t li = interferer.num_samples;
  if (lt == 0 || li == 0) throw DomainError("empty source signal");

  // overlap span, quantized to whole hops (never exceeding the target)
  const double want = scene.overlap_ratio * static_cast<double>(lt);
  size_t overlap =
      static_cast<size_t>(std::lround(want / static_cast<double>(hop_length))) *
      hop_length;
  overlap = std::min(overlap, lt);
  if (overlap == 0) overlap = std::min(hop_length, lt);
  if (li < overlap)
    throw DomainError("interferer shorter than the required overlap span");

  // interferer placed before or after the target, side drawn from the seed
  Rng placement(scene.seed);
  const bool leading = placement.below(2) == 0;
  // offsets of the two dry sources on a common timeline
  size_t target_begin, interferer_begin;
  if (leading) {
    // interferer ends `overlap` samples into the target
    target_begin = li - overlap;
    interferer_begin = 0;
  } else {
    // interferer starts `overlap` samples before the target end
    target_begin = 0;
    interferer_begin = lt - overlap;
  }

  const int max_order = default_max_order(scene.room);
  const double beta = wall_reflection(scene.room);

  // reverberate both sources at every mic
  std::vector<std::vector<double>> rev_t(R), rev_i(R);
  size_t max_len = 0;
  const std::vector<double> dry_t(target.channel(0),
                                  target.channel(0) + lt);
  const std::vector<double> dry_i(interferer.channel(0),
                                  interferer.channel(0) + li);
  for (size_t r = 0; r < R; ++r) {
    const ImpulseResponse ir_t = simulate_rir_with_beta(
        scene.room, scene.target_position, mics[r], max_order, beta, fs);
    const ImpulseResponse ir_i = simulate_rir_with_beta(
        scene.room, scene.interferer_position, mics[r], max_order, beta, fs);
    rev_t[r] = fft_convolve(dry_t, ir_t.taps);
    rev_i[r] = fft_convolve(dry_i, ir_i.taps);
    max_len = std::max({max_len, target_begin + rev_t[r].size(),
                        interferer_begin + rev_i[r].size()});
  }

  MixtureBundle bundle;
  bundle.target_reverberant = MultiChannelWaveform(R, max_len, fs);
  bundle.interferer_reverberant = MultiChannelWaveform(R, max_len, fs);
  for (size_t r = 0; r < R; ++r) {
    for (size_t n = 0; n < rev_t[r].size(); ++n)
      bundle.target_reverberant.at(r, target_begin + n) = rev_t[r][n];
    for (size_t n = 0; n < rev_i[r].size(); ++n)
      bundle.interferer_reverberant.at(r, interferer_begin + n) = rev_i[r][n];
  }

  // overlapped region of the two dry supports on the common timeline
  bundle.overlap_begin = std::max(target_begin, interferer_begin);
  bundle.overlap_end =
      std::min(target_begin + lt, interferer_begin + li);

  // exact SIR scaling over the overlapped region, reference channel
  const size_t ref = geometry.reference_index;
  double et = 0.0, ei = 0.0;
  for (size_t n = bundle.overlap_begin; n < bundle.overlap_end; ++n) {
    const double vt = bundle.target_reverberant.at(ref, n);
    const double vi = bundle.interferer_reverberant.at(ref, n);
    et += vt * vt;
    ei += vi * vi;
  }
  double gain = 0.0;
  if (ei > 0.0 && et > 0.0)
    gain = std::sqrt(et / (ei * std::pow(10.0, scene.sir_db / 10.0)));
  for (double &v : bundle.interferer_reverberant.data) v *= gain;

  bundle.mixture = MultiChannelWaveform(R, max_len, fs);
  for (size_t i = 0; i < bundle.mixture.data.size(); ++i)
    bundle.mixture.data[i] = bundle.target_reverberant.data[i] +
                             bundle.interferer_reverberant.data[i];
  return bundle;
}

}  // namespace beamsep
