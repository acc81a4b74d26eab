// core/src/evaluation.cc

// Copyright 2026  The cidnn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "cidnn/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

#include "cidnn/ci_inference.h"
#include "cidnn/config.h"
#include "cidnn/error.h"
#include "cidnn/levels.h"
#include "cidnn/metrics.h"
#include "cidnn/wav_io.h"

namespace cidnn {

std::string MethodSpec::Name() const {
  switch (kind) {
    case MethodKind::kIdentity: return "identity";
    case MethodKind::kClassical: return GainKindName(rule.kind);
    case MethodKind::kCi: return "ci";
    case MethodKind::kSingle: return "single:" + model.stem().string();
  }
  return "?";
}

MethodSpec ParseMethod(const std::string& text) {
  MethodSpec m;
  if (text == "identity") return m;
  if (text == "wf" || text == "lsa" || text == "sg") {
    m.kind = MethodKind::kClassical;
    m.rule.kind = ParseGainKind(text);
    m.stages = 1;
    return m;
  }
  if (text.rfind("ci:", 0) == 0) {
    m.kind = MethodKind::kCi;
    try {
      std::size_t used = 0;
      m.stages = std::stoi(text.substr(3), &used);
      if (used != text.size() - 3) throw Error("");
    } catch (const std::exception&) {
      throw Error("bad stage count in method '" + text + "'");
    }
    if (m.stages < 1) throw Error("method '" + text + "' needs at least one stage");
    return m;
  }
  if (text.rfind("single:", 0) == 0 && text.size() > 7) {
    m.kind = MethodKind::kSingle;
    m.stages = 1;
    m.model = text.substr(7);
    return m;
  }
  throw Error("unknown method '" + text + "' (expected identity, wf, lsa, sg, ci:R or single:PATH)");
}

UtteranceScores ScoreUtterance(std::span<const double> speech,
                               std::span<const double> scaled_noise,
                               const StageMasks& total_masks) {
  const Spectrogram s_spec = Analyze(speech);
  const Spectrogram d_spec = Analyze(scaled_noise);
  const ComponentPair comp = FilteredComponents(total_masks, s_spec, d_spec);
  TimeSignal enhanced(comp.speech.size());
  for (std::size_t i = 0; i < enhanced.size(); ++i) enhanced[i] = comp.speech[i] + comp.noise[i];

  const SampleRange r = ReconstructionInterior(speech.size());
  auto cut = [&](std::span<const double> x) { return x.subspan(r.begin, r.size()); };
  UtteranceScores out;
  out.delta_snr_db = DeltaSnrDb(cut(speech), cut(scaled_noise), cut(comp.speech), cut(comp.noise));
  out.ssdr_db = Ssdr(cut(speech), cut(comp.speech)).ssdr_db;
  out.wlakr_abs = std::abs(Wlakr(cut(scaled_noise), cut(comp.noise)));
  out.stoi = Stoi(cut(speech), cut(enhanced));
  return out;
}

namespace {

struct Job {
  std::size_t entry;
  std::size_t snr;
};

struct JobResult {
  std::vector<std::optional<UtteranceScores>> scores;  // per method
  std::vector<std::string> errors;
};

StageMasks MasksFor(const MethodSpec& m, const Spectrogram& noisy,
                    const std::optional<ModelFile>& ci_model,
                    const std::map<std::string, ModelFile>& single_models) {
  switch (m.kind) {
    case MethodKind::kIdentity:
      return StageMasks::Constant(noisy.NumFrames(), 1.0);
    case MethodKind::kClassical:
      return ClassicalMasks(noisy, m.rule);
    case MethodKind::kCi: {
      const CiResult r = CiEnhance(ci_model->params, ci_model->stats, m.stages, noisy);
      return MultiplyMasks(r.stage_masks);
    }
    case MethodKind::kSingle: {
      const ModelFile& model = single_models.at(m.model.string());
      return EnhanceStage(model.params, model.stats, noisy).masks;
    }
  }
  throw Error("unhandled method");
}

std::string FormatSnr(double snr) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", snr);
  return buf;
}

}  // namespace

EvaluationReport Evaluate(const Manifest& manifest, const std::vector<MethodSpec>& methods,
                          const EvaluationOptions& options) {
  if (methods.empty()) throw Error("no methods to evaluate");
  if (options.snr_levels.empty()) throw Error("no SNR levels to evaluate");
  std::map<std::string, ModelFile> single_models;
  for (const MethodSpec& m : methods) {
    if (m.kind == MethodKind::kCi && !options.model)
      throw Error("method " + m.Name() + " needs a model");
    if (m.kind == MethodKind::kSingle && !single_models.count(m.model.string()))
      single_models.emplace(m.model.string(), LoadModel(m.model));
  }

  std::vector<std::size_t> entries;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i)
    if (manifest.entries[i].split == options.split) entries.push_back(i);
  if (entries.empty())
    throw Error("manifest has no " + SplitName(options.split) + " entries");

  std::vector<Job> jobs;
  for (std::size_t e : entries)
    for (std::size_t s = 0; s < options.snr_levels.size(); ++s) jobs.push_back({e, s});
  std::vector<JobResult> results(jobs.size());

  auto run = [&](const Job& job, JobResult& res) {
    const ManifestEntry& entry = manifest.entries[job.entry];
    const double snr = options.snr_levels[job.snr];
    res.scores.assign(methods.size(), std::nullopt);
    const std::string where =
        entry.speech.filename().string() + " + " + entry.noise_label + " @ " + FormatSnr(snr) + " dB";
    Mixture mix;
    TimeSignal speech;
    try {
      speech = ReadWav(entry.speech);
      const TimeSignal noise = ReadWav(entry.noise);
      const std::size_t offset = ResolveNoiseOffset(entry, noise.size(), speech.size(),
                                                     DeriveSeed(options.seed, job.entry));
      mix = MixAtSnr({speech, noise, snr, offset});
    } catch (const std::exception& e) {
      for (const MethodSpec& m : methods) res.errors.push_back(where + " [" + m.Name() + "]: " + e.what());
      return;
    }
    const Spectrogram noisy = Analyze(mix.mixture);
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      try {
        const StageMasks masks = MasksFor(methods[mi], noisy, options.model, single_models);
        res.scores[mi] = ScoreUtterance(speech, mix.scaled_noise, masks);
      } catch (const std::exception& e) {
        res.errors.push_back(where + " [" + methods[mi].Name() + "]: " + e.what());
      }
    }
  };

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(jobs.size())));
  if (threads == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run(jobs[j], results[j]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) run(jobs[j], results[j]);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Aggregate in job order so the output does not depend on scheduling.
  EvaluationReport report;
  struct Acc {
    UtteranceScores sum;
    int n = 0;
  };
  std::map<std::string, std::vector<std::vector<Acc>>> acc;  // label -> method -> snr
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const std::string& label = manifest.entries[jobs[j].entry].noise_label;
    auto& table = acc[label];
    if (table.empty())
      table.assign(methods.size(), std::vector<Acc>(options.snr_levels.size()));
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const std::optional<UtteranceScores> s =
          results[j].scores.empty() ? std::nullopt : results[j].scores[mi];
      if (!s) continue;
      Acc& a = table[mi][jobs[j].snr];
      a.sum.delta_snr_db += s->delta_snr_db;
      a.sum.ssdr_db += s->ssdr_db;
      a.sum.wlakr_abs += s->wlakr_abs;
      a.sum.stoi += s->stoi;
      ++a.n;
    }
    for (const std::string& e : results[j].errors) report.failures.push_back(e);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [label, table] : acc) {
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      UtteranceScores avg;
      int avg_n = 0;
      for (std::size_t si = 0; si < options.snr_levels.size(); ++si) {
        const Acc& a = table[mi][si];
        MetricsRow row{label, options.snr_levels[si], methods[mi].Name(), methods[mi].stages,
                       {nan, nan, nan, nan}, a.n};
        if (a.n > 0) {
          row.mean = {a.sum.delta_snr_db / a.n, a.sum.ssdr_db / a.n, a.sum.wlakr_abs / a.n,
                      a.sum.stoi / a.n};
          avg.delta_snr_db += row.mean.delta_snr_db;
          avg.ssdr_db += row.mean.ssdr_db;
          avg.wlakr_abs += row.mean.wlakr_abs;
          avg.stoi += row.mean.stoi;
          ++avg_n;
        }
        report.rows.push_back(row);
      }
      MetricsRow row{label, std::nullopt, methods[mi].Name(), methods[mi].stages,
                     {nan, nan, nan, nan}, 0};
      if (avg_n > 0) {
        row.mean = {avg.delta_snr_db / avg_n, avg.ssdr_db / avg_n, avg.wlakr_abs / avg_n,
                    avg.stoi / avg_n};
        for (std::size_t si = 0; si < options.snr_levels.size(); ++si)
          row.utterances += table[mi][si].n;
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

void WriteCsv(std::ostream& out, const EvaluationReport& report) {
  out << "noise_type,input_snr_db,method,stages,delta_snr_db,ssdr_db,wlakr_abs,stoi\n";
  char buf[256];
  for (const MetricsRow& r : report.rows) {
    const std::string snr = r.input_snr_db ? FormatSnr(*r.input_snr_db) : "avg";
    // Values that round to zero print as 0.000000, never -0.000000.
    auto z = [](double v) { return std::abs(v) < 5e-7 ? 0.0 : v; };
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f", r.stages, z(r.mean.delta_snr_db),
                  z(r.mean.ssdr_db), z(r.mean.wlakr_abs), z(r.mean.stoi));
    out << r.noise_type << ',' << snr << ',' << r.method << ',' << buf << '\n';
  }
}

}  // namespace cidnn
