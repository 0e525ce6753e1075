// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace beamsep {

SiSnrResult si_snr(const MultiChannelWaveform &estimate,
                   const MultiChannelWaveform &reference) {
  if (estimate.num_channels != 1 || reference.num_channels != 1)
    throw ShapeError("si_snr expects mono signals");
  if (estimate.num_samples != reference.num_samples)
    throw ShapeError("si_snr length mismatch");
  const size_t n = reference.num_samples;
  if (n == 0) throw DomainError("si_snr on empty signals");

  const double *e = estimate.channel(0);
  const double *s = reference.channel(0);

  double mean_e = 0.0, mean_s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_e += e[i];
    mean_s += s[i];
  }
  mean_e /= static_cast<double>(n);
  mean_s /= static_cast<double>(n);

  double dot_es = 0.0, ss = 0.0, ee = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double de = e[i] - mean_e;
    const double ds = s[i] - mean_s;
    dot_es += de * ds;
    ss += ds * ds;
    ee += de * de;
  }
  if (ss <= 0.0) throw DomainError("si_snr reference is identically zero");

  SiSnrResult res;
  if (ee <= 0.0) {
    res.value_db = -kSiSnrCapDb;
    res.scale_factor = 0.0;
    return res;
  }

  const double alpha = dot_es / ss;  // optimal projection gain
  res.scale_factor = alpha;
  const double target_power = alpha * alpha * ss;
  // ||e - alpha s||^2 expanded to avoid a second pass
  const double resid_power = ee - 2.0 * alpha * dot_es + alpha * alpha * ss;

  if (resid_power <= 0.0 || target_power / resid_power >= 1e8) {
    res.value_db = kSiSnrCapDb;
  } else if (target_power <= 0.0 || resid_power / target_power >= 1e8) {
    res.value_db = -kSiSnrCapDb;
  } else {
    res.value_db = std::clamp(10.0 * std::log10(target_power / resid_power),
                              -kSiSnrCapDb, kSiSnrCapDb);
  }
  return res;
}

void EvalReport::finalize() {
  std::vector<double> deltas;
  double sum_d = 0.0, sum_in = 0.0, sum_out = 0.0;
  complete = true;
  for (const UtteranceScore &u : utterances) {
    if (!u.ok) {
      complete = false;
      continue;
    }
    deltas.push_back(u.delta);
    sum_d += u.delta;
    sum_in += u.si_snr_in;
    sum_out += u.si_snr_out;
  }
  const size_t n = deltas.size();
  if (n == 0) {
    mean_delta = median_delta = std_delta = mean_in = mean_out = 0.0;
    return;
  }
  mean_delta = sum_d / static_cast<double>(n);
  mean_in = sum_in / static_cast<double>(n);
  mean_out = sum_out / static_cast<double>(n);
  std::sort(deltas.begin(), deltas.end());
  median_delta = n % 2 == 1 ? deltas[n / 2]
                            : 0.5 * (deltas[n / 2 - 1] + deltas[n / 2]);
  double var = 0.0;
  for (double d : deltas) var += (d - mean_delta) * (d - mean_delta);
  std_delta = std::sqrt(var / static_cast<double>(n));
}

std::string report_to_json(const EvalReport &report) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["method"] = report.method;
  j["config_fingerprint"] = report.config_fingerprint;
  j["complete"] = report.complete;
  j["summary"] = {{"mean_delta_db", report.mean_delta},
                  {"median_delta_db", report.median_delta},
                  {"std_delta_db", report.std_delta},
                  {"mean_si_snr_in_db", report.mean_in},
                  {"mean_si_snr_out_db", report.mean_out},
                  {"num_utterances", report.utterances.size()}};
  nlohmann::json utts = nlohmann::json::array();
  for (const UtteranceScore &u : report.utterances) {
    nlohmann::json ju = {{"id", u.id}, {"ok", u.ok}};
    if (u.ok) {
      ju["si_snr_in_db"] = u.si_snr_in;
      ju["si_snr_out_db"] = u.si_snr_out;
      ju["delta_db"] = u.delta;
    } else {
      ju["error"] = u.error;
    }
    utts.push_back(ju);
  }
  j["utterances"] = utts;
  return j.dump(2) + "\n";
}

std::string report_to_table(const EvalReport &report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %12s %12s %12s\n", "utterance",
                "in (dB)", "out (dB)", "delta (dB)");
  os << line;
  for (const UtteranceScore &u : report.utterances) {
    if (u.ok) {
      std::snprintf(line, sizeof(line), "%-16s %12.2f %12.2f %12.2f\n",
                    u.id.c_str(), u.si_snr_in, u.si_snr_out, u.delta);
    } else {
      std::snprintf(line, sizeof(line), "%-16s FAILED: %s\n", u.id.c_str(),
                    u.error.c_str());
    }
    os << line;
  }
  std::snprintf(line, sizeof(line),
                "mean delta %.2f dB, median %.2f dB, std %.2f dB%s\n",
                report.mean_delta, report.median_delta, report.std_delta,
                report.complete ? "" : " (INCOMPLETE)");
  os << line;
  return os.str();
}

}  // namespace beamsep
