// tools/cli.cc

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

#include "cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cidnn/ci_inference.h"
#include "cidnn/classical.h"
#include "cidnn/config.h"
#include "cidnn/corpus.h"
#include "cidnn/error.h"
#include "cidnn/evaluation.h"
#include "cidnn/levels.h"
#include "cidnn/manifest.h"
#include "cidnn/mask_pipeline.h"
#include "cidnn/model_io.h"
#include "cidnn/wav_io.h"

namespace cidnn {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::uint64_t seed = 1;
  bool seed_given = false;
  int threads = 1;
};

std::vector<double> ParseDoubleList(const std::string& text, const std::string& what) {
  KeyValueConfig kv;
  kv.Set(what, text);
  return kv.GetDoubleList(what, {});
}

std::string SnrTag(double snr) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", snr);
  return buf;
}

// Training keys plus the manifest path, with flags overriding the file.
struct TrainSetup {
  TrainingConfig cfg;
  fs::path manifest;
};

TrainSetup LoadTrainSetup(const std::string& config_path, const std::string& manifest_flag,
                          const GlobalOptions& g, int epochs_flag) {
  KeyValueConfig kv = KeyValueConfig::Load(config_path);
  if (g.seed_given) kv.Set("seed", std::to_string(g.seed));
  if (epochs_flag >= 0) kv.Set("epochs", std::to_string(epochs_flag));
  TrainSetup setup;
  setup.cfg = TrainingConfigFrom(kv, {"manifest"});
  if (!manifest_flag.empty()) {
    setup.manifest = manifest_flag;
  } else if (kv.Has("manifest")) {
    setup.manifest = kv.GetString("manifest", "");
    if (setup.manifest.is_relative())
      setup.manifest = fs::path(config_path).parent_path() / setup.manifest;
  } else {
    throw Error("no manifest: pass --manifest or set 'manifest' in " + config_path);
  }
  return setup;
}

void CmdSynth(const std::string& out, const DeskCorpusOptions& options) {
  const Manifest m = WriteDeskCorpus(out, options);
  std::cerr << "wrote " << m.entries.size() << " manifest entries to "
            << (fs::path(out) / "manifest.tsv").string() << "\n";
}

void CmdMix(const std::string& manifest_path, double snr, const std::string& out,
            const std::string& split, const GlobalOptions& g) {
  const Manifest manifest = ReadManifest(manifest_path);
  fs::create_directories(out);
  std::ofstream list(fs::path(out) / "mixtures.tsv", std::ios::trunc);
  if (!list) throw Error("cannot write " + (fs::path(out) / "mixtures.tsv").string());
  list << "mixture\tnoise\tspeech\tinput_snr_db\tlabel\n";
  int written = 0;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& e = manifest.entries[i];
    if (!split.empty() && e.split != ParseSplit(split)) continue;
    const TimeSignal speech = ReadWav(e.speech);
    const TimeSignal noise = ReadWav(e.noise);
    const std::size_t offset =
        ResolveNoiseOffset(e, noise.size(), speech.size(), DeriveSeed(g.seed, i));
    const Mixture mix = MixAtSnr({speech, noise, snr, offset});
    char stem[256];
    std::snprintf(stem, sizeof(stem), "%04zu_%s_%s_%sdB", i, e.speech.stem().c_str(),
                  e.noise_label.c_str(), SnrTag(snr).c_str());
    const fs::path mix_path = fs::path(out) / (std::string(stem) + ".wav");
    const fs::path noise_path = fs::path(out) / (std::string(stem) + ".noise.wav");
    WriteWav(mix_path, mix.mixture);
    WriteWav(noise_path, mix.scaled_noise);
    list << mix_path.filename().string() << '\t' << noise_path.filename().string() << '\t'
         << fs::absolute(e.speech).string() << '\t' << SnrTag(snr) << '\t' << e.noise_label
         << '\n';
    ++written;
  }
  std::cerr << "wrote " << written << " mixtures to " << out << "\n";
}

void CmdStats(const std::string& config_path, const std::string& manifest_flag,
              const std::string& out, const GlobalOptions& g) {
  const TrainSetup setup = LoadTrainSetup(config_path, manifest_flag, g, -1);
  const TrainingData data = BuildTrainingSet(ReadManifest(setup.manifest), setup.cfg);
  const NormStats stats = ComputeNormStats(data.train.InputFrames());
  std::ofstream f(out, std::ios::trunc);
  if (!f) throw Error("cannot write " + out);
  f << "# bin\tmean\tstd\n";
  char buf[128];
  for (int k = 0; k < kNumBins; ++k) {
    std::snprintf(buf, sizeof(buf), "%d\t%.17g\t%.17g\n", k, stats.mean[k], stats.std[k]);
    f << buf;
  }
  std::cerr << "normalization statistics of " << data.train.NumExamples() << " frames written to "
            << out << "\n";
}

void CmdTrain(const std::string& config_path, const std::string& manifest_flag,
              const std::string& out, const std::string& log_path, int epochs_flag,
              const GlobalOptions& g) {
  const TrainSetup setup = LoadTrainSetup(config_path, manifest_flag, g, epochs_flag);
  const Manifest manifest = ReadManifest(setup.manifest);
  const TrainingData data = BuildTrainingSet(manifest, setup.cfg);
  std::cerr << "training on " << data.train.NumExamples() << " frames, validating on "
            << data.validation.NumExamples() << "\n";
  std::ofstream log_file;
  std::ostream* log = &std::cerr;
  if (!log_path.empty()) {
    log_file.open(log_path, std::ios::trunc);
    if (!log_file) throw Error("cannot write " + log_path);
    log = &log_file;
  }
  const TrainResult result = Train(setup.cfg, data, log);
  ModelFile model{result.params, result.stats, Fnv1a64(setup.cfg.Serialize())};
  SaveModel(out, model);
  std::cerr << "saved model from epoch " << result.best_epoch << " to " << out << "\n";
}

void CmdEnhance(const std::string& model_path, int stages, const std::string& rule,
                const std::string& in, const std::string& out) {
  const TimeSignal noisy = ReadWav(in);
  TimeSignal enhanced;
  if (!rule.empty()) {
    GainRule gain;
    gain.kind = ParseGainKind(rule);
    enhanced = EnhanceClassical(noisy, gain).enhanced;
  } else {
    const ModelFile model = LoadModel(model_path);
    enhanced = Synthesize(CiEnhance(model.params, model.stats, stages, Analyze(noisy)).output);
  }
  // Synthesis covers whole frames only; pad back to the input length.
  enhanced.resize(noisy.size(), 0.0);
  WriteWav(out, enhanced);
}

void CmdEvaluate(const std::string& manifest_path, const std::string& methods_text,
                 const std::string& model_path, const std::string& snrs,
                 const std::string& split, const std::string& out, const GlobalOptions& g) {
  std::vector<MethodSpec> methods;
  std::stringstream ss(methods_text);
  std::string item;
  while (std::getline(ss, item, ',')) methods.push_back(ParseMethod(item));
  EvaluationOptions options;
  options.seed = g.seed;
  options.threads = g.threads;
  options.split = ParseSplit(split);
  if (!snrs.empty()) options.snr_levels = ParseDoubleList(snrs, "--snrs");
  if (!model_path.empty()) options.model = LoadModel(model_path);
  const EvaluationReport report = Evaluate(ReadManifest(manifest_path), methods, options);
  for (const std::string& f : report.failures) std::cerr << "failed: " << f << "\n";
  std::cerr << "pesq: not implemented (ITU P.862)\n";
  if (out.empty() || out == "-") {
    WriteCsv(std::cout, report);
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + out);
    WriteCsv(f, report);
  }
}

}  // namespace

int RunCli(int argc, char** argv) {
  CLI::App app{"cidnn: mask-based speech enhancement with concatenated identical stages"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->each([&](const std::string&) {
    g.seed_given = true;
  });
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "Write the synthetic desk corpus and its manifest");
  std::string synth_out;
  DeskCorpusOptions corpus;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--train", corpus.train_utterances, "Training utterances");
  synth->add_option("--validation", corpus.validation_utterances, "Validation utterances");
  synth->add_option("--test", corpus.test_utterances, "Test utterances");
  synth->add_option("--utterance-seconds", corpus.utterance_s, "Utterance length");
  synth->add_option("--noise-seconds", corpus.noise_s, "Training noise length");

  auto* mix = app.add_subcommand("mix", "Mix manifest entries at one SNR");
  std::string mix_manifest, mix_out, mix_split;
  double mix_snr = 0.0;
  mix->add_option("--manifest", mix_manifest)->required()->check(CLI::ExistingFile);
  mix->add_option("--snr", mix_snr, "Input SNR in dB")->required();
  mix->add_option("--out", mix_out, "Output directory")->required();
  mix->add_option("--split", mix_split, "Only entries of this split");

  auto* stats = app.add_subcommand("stats", "Compute input normalization statistics");
  std::string stats_config, stats_manifest, stats_out;
  stats->add_option("--config", stats_config)->required()->check(CLI::ExistingFile);
  stats->add_option("--manifest", stats_manifest)->check(CLI::ExistingFile);
  stats->add_option("--out", stats_out)->required();

  auto* train = app.add_subcommand("train", "Train a stage or a single-network baseline");
  std::string train_config, train_manifest, train_out, train_log;
  int train_epochs = -1;
  train->add_option("--config", train_config)->required()->check(CLI::ExistingFile);
  train->add_option("--manifest", train_manifest)->check(CLI::ExistingFile);
  train->add_option("--out", train_out, "Model file")->required();
  train->add_option("--log", train_log, "Per-epoch loss table (default: stderr)");
  train->add_option("--epochs", train_epochs, "Override the configured epoch count")
      ->check(CLI::NonNegativeNumber);

  auto* enhance = app.add_subcommand("enhance", "Enhance one WAV file");
  std::string enh_model, enh_rule, enh_in, enh_out;
  int enh_stages = 1;
  auto* model_opt = enhance->add_option("--model", enh_model)->check(CLI::ExistingFile);
  enhance->add_option("--stages", enh_stages, "Stage count R")->check(CLI::PositiveNumber);
  auto* rule_opt = enhance->add_option("--rule", enh_rule, "Classical gain rule")
                       ->check(CLI::IsMember({"wf", "lsa", "sg"}));
  model_opt->excludes(rule_opt);
  enhance->add_option("input", enh_in)->required()->check(CLI::ExistingFile);
  enhance->add_option("output", enh_out)->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score methods on the test entries");
  std::string ev_manifest, ev_methods, ev_model, ev_snrs, ev_split = "test", ev_out;
  evaluate->add_option("--manifest", ev_manifest)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--methods", ev_methods, "identity,wf,lsa,sg,ci:R,single:PATH")
      ->required();
  evaluate->add_option("--model", ev_model, "Stage for ci:R methods")->check(CLI::ExistingFile);
  evaluate->add_option("--snrs", ev_snrs, "Comma-separated input SNRs in dB");
  evaluate->add_option("--split", ev_split);
  evaluate->add_option("--out", ev_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*synth) {
      corpus.seed = g.seed;
      CmdSynth(synth_out, corpus);
    } else if (*mix) {
      CmdMix(mix_manifest, mix_snr, mix_out, mix_split, g);
    } else if (*stats) {
      CmdStats(stats_config, stats_manifest, stats_out, g);
    } else if (*train) {
      CmdTrain(train_config, train_manifest, train_out, train_log, train_epochs, g);
    } else if (*enhance) {
      if (enh_model.empty() && enh_rule.empty())
        throw Error("enhance needs --model or --rule");
      CmdEnhance(enh_model, enh_stages, enh_rule, enh_in, enh_out);
    } else if (*evaluate) {
      CmdEvaluate(ev_manifest, ev_methods, ev_model, ev_snrs, ev_split, ev_out, g);
    }
  } catch (const std::exception& e) {
    std::cerr << "cidnn: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace cidnn
