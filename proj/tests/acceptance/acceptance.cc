// tests/acceptance/acceptance.cc

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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cidnn/ci_inference.h"
#include "cidnn/classical.h"
#include "cidnn/corpus.h"
#include "cidnn/evaluation.h"
#include "cidnn/levels.h"
#include "cidnn/mask_pipeline.h"
#include "cidnn/metrics.h"
#include "cidnn/model_io.h"
#include "cidnn/stft.h"
#include "cidnn/wav_io.h"
#include "grad_check.h"
#include "test_util.h"

namespace cidnn {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Collects failed sub-checks into one detail string.
class Checks {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failed_.push_back(what);
    }
  }
  void Note(const std::string& s) { notes_.push_back(s); }
  Outcome Done() const {
    std::string d;
    for (const auto& n : notes_) d += (d.empty() ? "" : "; ") + n;
    for (const auto& f : failed_) d += (d.empty() ? "" : "; ") + std::string("FAILED ") + f;
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> failed_;
  std::vector<std::string> notes_;
};

// ---------------------------------------------------------------------------
// 1. STFT round trip.
Outcome StftRoundTrip() {
  Checks c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 4000 + rng() % 60000;
    const TimeSignal x = testing::RandomSignal(n, rng(), 0.3);
    const TimeSignal y = Synthesize(Analyze(x));
    const SampleRange r = ReconstructionInterior(n);
    worst = std::max(worst, testing::RelativeL2(y.data() + r.begin, x.data() + r.begin, r.size()));
  }
  const double secs = Seconds(t0);
  c.Note("max rel L2 " + Fmt("%.3g", worst) + ", " + Fmt("%.2f", secs) + " s");
  c.Expect(worst < 1e-10, "error >= 1e-10");
  c.Expect(secs < 5.0, "runtime >= 5 s");
  return c.Done();
}

// 2. Analysis against direct DFT summation.
Outcome DftOracle() {
  Checks c;
  const auto& w = AnalysisWindow();
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const TimeSignal x = testing::RandomSignal(256 + 128 * 9, 200 + trial, 0.5);
    const Spectrogram s = Analyze(x);
    for (std::size_t l = 0; l < s.NumFrames(); ++l) {
      double ref_norm = 0.0, err = 0.0;
      for (int k = 0; k < kNumBins; ++k) {
        std::complex<long double> acc = 0.0L;
        for (int n = 0; n < kFftSize; ++n) {
          const long double ang = -2.0L * std::numbers::pi_v<long double> * k * n / kFftSize;
          acc += static_cast<long double>(x[l * kFrameShift + n] * w[n]) *
                 std::complex<long double>(std::cos(ang), std::sin(ang));
        }
        const std::complex<double> ref(static_cast<double>(acc.real()),
                                       static_cast<double>(acc.imag()));
        ref_norm += std::norm(ref);
        err += std::norm(ref - s.frames[l][k]);
      }
      worst = std::max(worst, std::sqrt(err / ref_norm));
    }
  }
  c.Note("max rel error " + Fmt("%.3g", worst));
  c.Expect(worst < 1e-9, "error >= 1e-9");
  return c.Done();
}

// 3. Mixing accuracy.
Outcome MixingAccuracy() {
  Checks c;
  std::mt19937_64 rng(303);
  const NoiseKind kinds[] = {NoiseKind::kWhite, NoiseKind::kBabble, NoiseKind::kLowpass};
  double worst = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    const TimeSignal s = SyntheticSpeech(rng(), 2.0 + (rng() % 100) / 50.0);
    const TimeSignal n = SyntheticNoise(kinds[rng() % 3], rng(), 5.0);
    const std::size_t offset = RandomNoiseOffset(n.size(), s.size(), rng());
    for (double snr = -5.0; snr <= 20.0; snr += 5.0) {
      const Mixture m = MixAtSnr({s, n, snr, offset});
      // Noise recovered from the mixture itself, not the returned component.
      TimeSignal d(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) d[i] = m.mixture[i] - s[i];
      worst = std::max(worst, std::abs(ActiveSpeechLevelDb(s) - RmsLevelDb(d) - snr));
    }
  }
  c.Note("max |error| " + Fmt("%.2g", worst) + " dB over 50 pairs x 6 SNRs");
  c.Expect(worst <= 0.1, "error > 0.1 dB");
  return c.Done();
}

// 4. Gradient fidelity on the full basic module.
Outcome GradientFidelity() {
  Checks c;
  const auto t0 = Clock::now();
  const Architecture arch = MakeArchitecture(Preset::kBasic, 0.2);
  MlpParams p = InitMlp(arch.layers, arch.bypasses, 404);
  // Move BN parameters away from their initial values so every group has
  // a generic gradient.
  std::mt19937_64 rng(405);
  std::normal_distribution<double> g(0.0, 0.1);
  for (auto& layer : p.layers) {
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] = g(rng);
    for (Eigen::Index i = 0; i < layer.bn_gain.size(); ++i) layer.bn_gain[i] = 1.0 + g(rng);
    for (Eigen::Index i = 0; i < layer.bn_bias.size(); ++i) layer.bn_bias[i] = g(rng);
  }
  const int batch = 16;
  Eigen::MatrixXd x(645, batch), mags(129, batch), targets(129, batch);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng) * 10.0;
  for (Eigen::Index i = 0; i < mags.size(); ++i) {
    mags(i) = std::abs(g(rng)) * 10.0;
    targets(i) = std::abs(g(rng)) * 5.0;
  }
  const auto checks = testing::CheckGradients(p, x, mags, targets, 40, 406);
  double worst = 0.0;
  std::string worst_name;
  int total = 0;
  for (const auto& gc : checks) {
    total += gc.checked;
    if (gc.max_rel_error > worst) {
      worst = gc.max_rel_error;
      worst_name = gc.name;
    }
  }
  const double secs = Seconds(t0);
  c.Note(std::to_string(checks.size()) + " groups, " + std::to_string(total) +
         " entries, max rel error " + Fmt("%.3g", worst) + " (" + worst_name + "), " +
         Fmt("%.1f", secs) + " s");
  c.Expect(checks.size() == 24, "expected 24 parameter groups");
  c.Expect(worst < 1e-4, "rel error >= 1e-4");
  c.Expect(secs < 120.0, "runtime >= 2 min");
  return c.Done();
}

// A stage with spread-out masks and matching statistics, used where a
// trained model is not needed.
struct RandomStage {
  MlpParams params;
  NormStats stats;
  RandomStage() {
    const Architecture arch = MakeArchitecture(Preset::kBasic, 0.2);
    params = InitMlp(arch.layers, arch.bypasses, 505);
    params.layers.back().bn_gain.setConstant(3.0);
    params.layers.back().bn_bias.setConstant(0.5);
    std::vector<BinVector> frames;
    for (int i = 0; i < 4; ++i) {
      const Spectrogram s = Analyze(
          MixAtSnr({SyntheticSpeech(510 + i, 3.0), SyntheticNoise(NoiseKind::kWhite, 520 + i, 3.0),
                    5.0, 0})
              .mixture);
      for (const auto& f : s.frames) frames.push_back(Magnitudes(f));
    }
    stats = ComputeNormStats(frames);
  }
};

// 5. Mask product, R = 1 and composability.
Outcome MaskConsistency() {
  Checks c;
  const RandomStage st;
  double worst = 0.0;
  bool r1_equal = true, composable = true;
  for (int u = 0; u < 3; ++u) {
    const Spectrogram y = Analyze(
        MixAtSnr({SyntheticSpeech(530 + u, 3.0), SyntheticNoise(NoiseKind::kBabble, 540 + u, 3.0),
                  0.0, 0})
            .mixture);
    for (int r = 1; r <= 3; ++r) {
      const CiResult ci = CiEnhance(st.params, st.stats, r, y);
      const Spectrogram direct = ApplyMasks(y, MultiplyMasks(ci.stage_masks));
      double num = 0.0, den = 0.0;
      for (std::size_t l = 0; l < y.NumFrames(); ++l)
        for (int k = 0; k < kNumBins; ++k) {
          num += std::norm(direct.frames[l][k] - ci.output.frames[l][k]);
          den += std::norm(ci.output.frames[l][k]);
        }
      worst = std::max(worst, std::sqrt(num / den));
    }
    const CiResult one = CiEnhance(st.params, st.stats, 1, y);
    const StageOutput so = EnhanceStage(st.params, st.stats, y);
    for (std::size_t l = 0; l < y.NumFrames(); ++l)
      r1_equal &= one.output.frames[l] == so.output.frames[l];
    for (auto [a, b] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}}) {
      const CiResult whole = CiEnhance(st.params, st.stats, a + b, y);
      const CiResult first = CiEnhance(st.params, st.stats, a, y);
      const CiResult second = CiEnhance(st.params, st.stats, b, first.output);
      for (std::size_t l = 0; l < y.NumFrames(); ++l)
        composable &= whole.output.frames[l] == second.output.frames[l];
    }
  }
  c.Note("mask product rel error " + Fmt("%.3g", worst));
  c.Expect(worst <= 1e-12, "mask product error > 1e-12");
  c.Expect(r1_equal, "R=1 differs from a single stage");
  c.Expect(composable, "R=a+b differs from R=b after R=a");
  return c.Done();
}

// 6. Context arithmetic.
Outcome ContextArithmetic() {
  Checks c;
  const int expect[] = {5, 9, 13};
  std::string got;
  for (int r = 1; r <= 3; ++r) {
    const ContextFrames f = RequiredContext(r);
    got += (r > 1 ? "/" : "") + std::to_string(f.total);
    c.Expect(f.total == expect[r - 1] && f.left == 2 * r && f.right == 2 * r,
             "R=" + std::to_string(r));
  }
  c.Note("totals " + got);
  return c.Done();
}

// 8. Metric identities.
Outcome MetricIdentities() {
  Checks c;
  const TimeSignal s = SyntheticSpeech(801, 3.0);
  const TimeSignal d = SyntheticNoise(NoiseKind::kBabble, 802, 3.0);
  const double dsnr = DeltaSnrDb(s, d, s, d);
  c.Note("dSNR(identity) " + Fmt("%.3g", dsnr));
  c.Expect(std::abs(dsnr) <= 1e-9, "dSNR(identity) != 0");
  const double same = Ssdr(s, s).ssdr_db;
  c.Note("SSDR(s,s) " + Fmt("%g", same));
  c.Expect(same == 30.0, "SSDR(s,s) != 30");
  const double silent = Ssdr(s, TimeSignal(s.size(), 0.0)).ssdr_db;
  const double shown = std::abs(silent) < 5e-7 ? 0.0 : silent;
  c.Note("SSDR(s,0) " + Fmt("%.3f", shown));
  c.Expect(silent == -10.0,
           "SSDR(s,0) = " + Fmt("%.3f", shown) +
               " dB, expected -10: with s~ = 0 the frame ratio sum s^2 / sum s^2 is 1");
  const double wl = Wlakr(d, d);
  c.Note("WLAKR(d,d) " + Fmt("%g", wl));
  c.Expect(wl == 0.0, "WLAKR(d,d) != 0");
  const double st = Stoi(s, s);
  c.Note("STOI(s,s) " + Fmt("%.9f", st));
  c.Expect(std::abs(st - 1.0) <= 1e-6, "STOI(s,s) != 1");
  TimeSignal late(s.size(), 0.0);
  for (std::size_t i = 3; i < s.size(); ++i) late[i] = s[i - 3];
  const SsdrResult r = Ssdr(s, late);
  c.Note("delay " + std::to_string(r.delay));
  c.Expect(r.delay == 3 && r.ssdr_db == 30.0, "3-sample delay not recovered");
  return c.Done();
}

// 11. Classical baselines.
Outcome ClassicalSanity() {
  Checks c;
  for (GainKind kind : {GainKind::kWiener, GainKind::kLsa, GainKind::kSuperGaussian}) {
    GainRule rule;
    rule.kind = kind;
    double sum = 0.0;
    double gmin = 1.0, gmax = 0.0;
    const int n = 4;
    for (int u = 0; u < n; ++u) {
      const TimeSignal s = SyntheticSpeech(1100 + u, 4.0);
      const TimeSignal noise = SyntheticNoise(NoiseKind::kWhite, 1110 + u, 4.0);
      const Mixture m = MixAtSnr({s, noise, 0.0, 0});
      const StageMasks masks = ClassicalMasks(Analyze(m.mixture), rule);
      for (const auto& f : masks.values)
        for (double g : f) {
          gmin = std::min(gmin, g);
          gmax = std::max(gmax, g);
        }
      sum += ScoreUtterance(s, m.scaled_noise, masks).delta_snr_db;
    }
    const std::string name = GainKindName(kind);
    c.Note(name + " dSNR " + Fmt("%.2f", sum / n) + " dB, gains [" + Fmt("%.4f", gmin) + ", " +
           Fmt("%.4f", gmax) + "]");
    c.Expect(sum / n > 0.0, name + " dSNR <= 0");
    c.Expect(gmin >= rule.g_min && gmax <= 1.0, name + " gain outside [g_min, 1]");
  }
  return c.Done();
}

// ---------------------------------------------------------------------------
// Desk-scale experiment shared by criteria 7, 9 and 10.

TrainingConfig DeskTrainingConfig() {
  TrainingConfig cfg;
  cfg.preset = Preset::kBasic;
  cfg.target_kind = TargetKind::kNoisyDelta;
  cfg.target_delta_db = 5.0;
  cfg.minibatch = 128;
  cfg.dropout = 0.2;
  cfg.learning_rate = 1e-3;
  cfg.lr_decay = 0.7;
  cfg.epochs = 6;
  cfg.seed = 1;
  return cfg;
}

struct Desk {
  fs::path dir;
  Manifest manifest;
  ModelFile model;
  double train_seconds = 0.0;
  int best_epoch = 0;
};

Desk& DeskExperiment(const fs::path& work) {
  static std::optional<Desk> desk;
  if (desk) return *desk;
  desk.emplace();
  desk->dir = work / "desk";
  DeskCorpusOptions opt;  // 160 train, 20 validation, 12 test utterances of 3 s
  opt.seed = 1;
  desk->manifest = WriteDeskCorpus(desk->dir, opt);
  const TrainingConfig cfg = DeskTrainingConfig();
  const auto t0 = Clock::now();
  std::ofstream log(desk->dir / "train.log");
  const TrainResult tr = Train(cfg, desk->manifest, &log);
  desk->train_seconds = Seconds(t0);
  desk->best_epoch = tr.best_epoch;
  desk->model = {tr.params, tr.stats, Fnv1a64(cfg.Serialize())};
  SaveModel(desk->dir / "stage.cidnn", desk->model);
  std::printf("# desk training: %.0f s, best epoch %d of %d\n", desk->train_seconds,
              tr.best_epoch, cfg.epochs);
  std::fflush(stdout);
  return *desk;
}

// 7. Stage monotonicity on every evaluated utterance.
Outcome StageMonotonicity(const fs::path& work) {
  Checks c;
  const Desk& desk = DeskExperiment(work);
  long checked = 0, violations = 0;
  for (std::size_t i = 0; i < desk.manifest.entries.size(); ++i) {
    const ManifestEntry& e = desk.manifest.entries[i];
    if (e.split != Split::kTest) continue;
    const TimeSignal s = ReadWav(e.speech);
    const TimeSignal n = ReadWav(e.noise);
    const std::size_t offset = ResolveNoiseOffset(e, n.size(), s.size(), DeriveSeed(1, i));
    for (double snr = -5.0; snr <= 20.0; snr += 5.0) {
      Spectrogram prev = Analyze(MixAtSnr({s, n, snr, offset}).mixture);
      for (int r = 1; r <= 3; ++r) {
        const Spectrogram next = EnhanceStage(desk.model.params, desk.model.stats, prev).output;
        for (std::size_t l = 0; l < prev.NumFrames(); ++l)
          for (int k = 0; k < kNumBins; ++k) {
            ++checked;
            if (std::abs(next.frames[l][k]) > std::abs(prev.frames[l][k])) ++violations;
          }
        prev = next;
      }
    }
  }
  c.Note(std::to_string(checked) + " bin comparisons, " + std::to_string(violations) +
         " increases");
  c.Expect(checked > 0 && violations == 0, "magnitude increased across a stage");
  return c.Done();
}

// Mean over all noise types of the rows for one method and SNR.
double MeanDelta(const EvaluationReport& r, const std::string& method, int stages, double snr) {
  double sum = 0.0;
  int n = 0;
  for (const MetricsRow& row : r.rows)
    if (row.method == method && row.stages == stages && row.input_snr_db &&
        *row.input_snr_db == snr && row.utterances > 0) {
      sum += row.mean.delta_snr_db * row.utterances;
      n += row.utterances;
    }
  return n ? sum / n : std::nan("");
}

// 9. Training trend on held-out noise at 0 dB.
Outcome TrainingTrend(const fs::path& work) {
  Checks c;
  const Desk& desk = DeskExperiment(work);
  EvaluationOptions opt;
  opt.snr_levels = {0.0};
  opt.split = Split::kTest;
  opt.model = desk.model;
  const EvaluationReport r = Evaluate(
      desk.manifest, {ParseMethod("ci:1"), ParseMethod("ci:2"), ParseMethod("ci:3")}, opt);
  {
    std::ofstream csv(desk.dir / "trend.csv");
    WriteCsv(csv, r);
  }
  c.Expect(r.failures.empty(), "evaluation failures");
  double d[4];
  for (int s = 1; s <= 3; ++s) d[s] = MeanDelta(r, "ci", s, 0.0);
  c.Note("dSNR R=1/2/3: " + Fmt("%.2f", d[1]) + " / " + Fmt("%.2f", d[2]) + " / " +
         Fmt("%.2f", d[3]) + " dB (training " + Fmt("%.0f", desk.train_seconds) + " s)");
  c.Expect(d[1] >= 3.0, "1-stage dSNR < 3 dB");
  c.Expect(d[1] < d[2] && d[2] < d[3], "dSNR not increasing with stages");
  c.Expect(desk.train_seconds <= 1800.0, "training took more than 30 min");
  return c.Done();
}

// 10. One stage moves the re-measured SNR by about +5 dB on the training
// noise distribution (validation utterances, training noise recordings).
Outcome NoisyTargetSemantics(const fs::path& work) {
  Checks c;
  const Desk& desk = DeskExperiment(work);
  for (double snr : {0.0, 5.0}) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < desk.manifest.entries.size(); ++i) {
      const ManifestEntry& e = desk.manifest.entries[i];
      if (e.split != Split::kValidation) continue;
      const TimeSignal s = ReadWav(e.speech);
      const TimeSignal noise = ReadWav(e.noise);
      const std::size_t offset = ResolveNoiseOffset(e, noise.size(), s.size(), DeriveSeed(1, i));
      const Mixture m = MixAtSnr({s, noise, snr, offset});
      const CiResult ci =
          CiEnhance(desk.model.params, desk.model.stats, 1, Analyze(m.mixture));
      const ComponentPair comp =
          FilteredComponents(MultiplyMasks(ci.stage_masks), Analyze(s), Analyze(m.scaled_noise));
      const SampleRange r = ReconstructionInterior(s.size());
      const std::span<const double> fs(comp.speech.data() + r.begin, r.size());
      const std::span<const double> fd(comp.noise.data() + r.begin, r.size());
      sum += MeasuredSnrDb(fs, fd);
      ++n;
    }
    const double out = sum / n;
    c.Note(Fmt("%g", snr) + " dB in -> " + Fmt("%.2f", out) + " dB out");
    c.Expect(std::abs(out - (snr + 5.0)) <= 2.0,
             "output SNR at " + Fmt("%g", snr) + " dB input off target by more than 2 dB");
  }
  return c.Done();
}

// 12. Determinism of the command-line tool.
Outcome Determinism(const fs::path& work) {
  Checks c;
  const std::string tool = CIDNN_TOOL_PATH;
  auto run_once = [&](const fs::path& dir) {
    fs::create_directories(dir);
    {
      std::ofstream cfg(dir / "train.cfg");
      cfg << "manifest = corpus/manifest.tsv\nsnr_levels = 0, 10\nepochs = 2\n"
          << "max_steps_per_epoch = 10\nlearning_rate = 0.001\nseed = 7\n";
    }
    const std::string d = dir.string();
    const std::string cmds[] = {
        tool + " --seed 7 --threads 1 synth --out " + d + "/corpus --train 6 --validation 2" +
            " --test 1 --utterance-seconds 2 --noise-seconds 8",
        tool + " --seed 7 --threads 1 train --config " + d + "/train.cfg --out " + d +
            "/model.cidnn --log " + d + "/train.log",
        tool + " --seed 7 --threads 1 enhance --model " + d + "/model.cidnn --stages 2 " + d +
            "/corpus/speech/test_0000.wav " + d + "/enhanced.wav",
        tool + " --seed 7 --threads 1 evaluate --manifest " + d +
            "/corpus/manifest.tsv --methods identity,lsa,ci:2 --model " + d +
            "/model.cidnn --snrs 0,5 --out " + d + "/eval.csv",
    };
    for (const auto& cmd : cmds) {
      const std::string quiet = cmd + " 2>>" + d + "/stderr.txt";
      if (std::system(quiet.c_str()) != 0) return false;
    }
    return true;
  };
  const fs::path a = work / "det_a", b = work / "det_b";
  const bool ok_a = run_once(a), ok_b = run_once(b);
  c.Expect(ok_a && ok_b, "a command failed");
  if (!(ok_a && ok_b)) return c.Done();
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const char* f : {"model.cidnn", "enhanced.wav", "eval.csv", "train.log"}) {
    const std::string x = slurp(a / f), y = slurp(b / f);
    c.Expect(!x.empty() && x == y, std::string(f) + " differs");
  }
  c.Note("model, audio, CSV and log byte-identical across two runs");
  return c.Done();
}

}  // namespace
}  // namespace cidnn

int main(int argc, char** argv) {
  using namespace cidnn;
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  std::string work_dir;
  bool keep = false;
  app.add_option("--only", only, "Run only these criteria (1-12)");
  app.add_option("--work-dir", work_dir, "Scratch directory (default: a fresh temp dir)");
  app.add_flag("--keep", keep, "Keep the scratch directory");
  CLI11_PARSE(app, argc, argv);

  fs::path work = work_dir.empty()
                      ? fs::temp_directory_path() /
                            ("cidnn_acceptance_" + std::to_string(std::random_device{}()))
                      : fs::path(work_dir);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"STFT round trip", StftRoundTrip},
      {"DFT oracle", DftOracle},
      {"mixing accuracy", MixingAccuracy},
      {"gradient fidelity", GradientFidelity},
      {"stage mask consistency", MaskConsistency},
      {"context arithmetic", ContextArithmetic},
      {"stage monotonicity", [&] { return StageMonotonicity(work); }},
      {"metric identities", MetricIdentities},
      {"desk training trend", [&] { return TrainingTrend(work); }},
      {"noisy-target semantics", [&] { return NoisyTargetSemantics(work); }},
      {"classical baselines", ClassicalSanity},
      {"determinism", [&] { return Determinism(work); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  if (!keep && work_dir.empty()) {
    std::error_code ec;
    fs::remove_all(work, ec);
  }
  return failed;
}
