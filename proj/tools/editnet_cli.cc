// editnet_cli.cc

// Copyright 2026  The editnet Authors
//
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

// Command-line front end.  Exit codes: 0 success, 1 usage error, 2 data or
// format error, 3 numerical failure, 4 gradient check failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "editnet/checkpoint.h"
#include "editnet/config_file.h"
#include "editnet/embedding_set.h"
#include "editnet/errors.h"
#include "editnet/evaluation.h"
#include "editnet/gradcheck.h"
#include "editnet/pipeline.h"
#include "editnet/synth.h"
#include "editnet/trainer.h"

namespace {

using namespace editnet;

constexpr int kExitUsage = 1;
constexpr int kExitFormat = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

const std::vector<std::string> kMethods = {
    "editnet", "none", "center", "center_shift",
    "standardize", "standardize_recolor", "coral"};

// Every run echoes its resolved settings, prefixed so they read as comments.
void PrintConfig(const std::string& command, const std::string& text) {
  std::cout << "# command=" << command << "\n";
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::cout << "# " << text.substr(pos, end - pos) << "\n";
    pos = end + 1;
  }
  std::cout.flush();
}

void WriteText(const std::string& path, const std::string& text) {
  WriteFile(path, text);
}

int CmdStats(const std::string& in, const std::string& out, double floor) {
  PrintConfig("stats", "embeddings=" + in + "\nout=" + out +
                           "\nstd_floor=" + FormatDouble(floor));
  const EmbeddingSet set = LoadEmbeddings(in);
  set.Validate();
  Checkpoint ckpt;
  ckpt.stats = ComputeStats(set.embeddings, floor);
  SaveCheckpoint(ckpt, out);
  std::cout << "rows=" << set.rows() << " dim=" << set.dim() << "\n";
  return 0;
}

int CmdTrain(const std::string& tar_path, const std::string& src_path,
             const std::string& config_path, const std::string& variant,
             const std::string& seed, const std::string& epochs,
             const std::string& out, std::string log_path) {
  TrainConfig config;
  if (!config_path.empty()) {
    config = TrainConfig::FromText(ReadFile(config_path), config_path);
  }
  if (!variant.empty()) config.variant = ParseVariant(variant);
  if (!seed.empty()) config.seed = ParseUint("seed", seed);
  if (!epochs.empty()) config.epochs = ParseInt("epochs", epochs);
  config.Validate();
  if (log_path.empty()) log_path = out + ".log";
  PrintConfig("train", "tar=" + tar_path + "\nsrc=" + src_path + "\nout=" + out +
                           "\nlog=" + log_path + "\n" + config.ToText());

  const EmbeddingSet tar = LoadEmbeddings(tar_path, Domain::kTarget);
  const EmbeddingSet src = LoadEmbeddings(src_path, Domain::kSource);
  std::ofstream log(log_path, std::ios::binary);
  if (!log) throw FormatError("cannot open " + log_path + " for writing");
  try {
    const Checkpoint ckpt = FitCheckpoint(
        tar, src, config, [&log](const TrainLogRecord& r) { WriteLogRecord(log, r); });
    SaveCheckpoint(ckpt, out);
    std::printf("model_hash=%016llx\n",
                static_cast<unsigned long long>(ckpt.model->StateHash()));
  } catch (const TrainingAborted& e) {
    // Keep the last good parameters for inspection.
    Checkpoint partial;
    partial.config = config;
    partial.model.emplace(*e.model());
    SaveCheckpoint(partial, out + ".aborted");
    throw;
  }
  return 0;
}

int CmdTransfer(const std::string& ckpt_path, const std::string& in,
                const std::string& method, const std::string& out) {
  PrintConfig("transfer", "ckpt=" + ckpt_path + "\nin=" + in + "\nmethod=" +
                              method + "\nout=" + out);
  const Method m = ParseMethod(method);
  const Checkpoint ckpt = LoadCheckpoint(ckpt_path);
  const EmbeddingSet set = LoadEmbeddings(in);
  set.Validate();
  SaveEmbeddings(ApplyMethod(ckpt, m, set), out);
  return 0;
}

int CmdEval(const std::string& ckpt_path, const std::string& eval_path,
            const std::string& trials_path, const std::string& method,
            std::string scores_path, std::string report_path) {
  PrintConfig("eval", "ckpt=" + ckpt_path + "\neval=" + eval_path + "\ntrials=" +
                          trials_path + "\nmethod=" + method + "\nscores=" +
                          scores_path + "\nreport=" + report_path);
  const Method m = ParseMethod(method);
  const Checkpoint ckpt = LoadCheckpoint(ckpt_path);
  const EmbeddingSet set = LoadEmbeddings(eval_path);
  set.Validate();
  const TrialList trials = LoadTrials(trials_path);
  const EvalReport report = EvaluatePipeline(ckpt, m, set, trials);
  const std::string text = FormatReport(report);
  if (!scores_path.empty()) WriteText(scores_path, FormatScores(trials, report.scores));
  if (!report_path.empty()) WriteText(report_path, text);
  std::cout << text;
  return 0;
}

int CmdGradcheck(const GradcheckOptions& opt) {
  PrintConfig("gradcheck",
              "seed=" + std::to_string(opt.seed) + "\nx_dim=" + std::to_string(opt.x_dim) +
                  "\nz_dim=" + std::to_string(opt.z_dim) + "\nbatch=" +
                  std::to_string(opt.batch) + "\nstep=" + FormatDouble(opt.step) +
                  "\ntolerance=" + FormatDouble(opt.tolerance) +
                  (opt.corrupt ? "\ncorrupt=true" : ""));
  const GradcheckReport report = RunGradcheck(opt);
  std::cout << FormatGradcheck(report);
  return report.passed() ? 0 : kExitVerification;
}

int CmdSynth(const std::string& spec_path, const std::string& seed,
             const std::string& out) {
  SynthSpec spec;
  if (!spec_path.empty()) spec = SynthSpec::FromText(ReadFile(spec_path), spec_path);
  if (!seed.empty()) spec.seed = ParseUint("seed", seed);
  spec.Validate();
  PrintConfig("synth", "out=" + out + "\n" + spec.ToText());
  const SynthData data = GenerateSynthetic(spec);
  WriteSynthetic(data, out);
  std::cout << "src_train=" << data.src_train.rows()
            << " tar_train=" << data.tar_train.rows()
            << " tar_eval=" << data.tar_eval.rows()
            << " trials=" << data.trials.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"editnet: embedding domain transfer for speaker verification"};
  app.require_subcommand(1, 1);

  std::string in, out, ckpt, method, tar, src, config, variant, seed, epochs,
      log, eval, trials, scores, report, spec;
  double std_floor = kStdFloor;
  GradcheckOptions gc;

  auto* stats = app.add_subcommand("stats", "per-channel mean/std of an embedding set");
  stats->add_option("--embeddings", in, "EDBF input")->required();
  stats->add_option("--out", out, "output container")->required();
  stats->add_option("--std-floor", std_floor, "lower bound on each std");

  auto* train = app.add_subcommand("train", "train the transfer network");
  train->add_option("--tar", tar, "target-domain training set")->required();
  train->add_option("--src", src, "source-domain training set")->required();
  train->add_option("--config", config, "key=value training config");
  train->add_option("--variant", variant, "full|no_prenorm|no_prior_transfer|no_cosine")
      ->check(CLI::IsMember({"full", "no_prenorm", "no_prior_transfer", "no_cosine"}));
  train->add_option("--seed", seed, "overrides the config seed");
  train->add_option("--epochs", epochs, "overrides the config epochs");
  train->add_option("--log", log, "training log (default OUT.log)");
  train->add_option("--out", out, "output checkpoint")->required();

  auto* transfer = app.add_subcommand("transfer", "map target embeddings");
  transfer->add_option("--ckpt", ckpt, "checkpoint")->required();
  transfer->add_option("--in", in, "EDBF input")->required();
  transfer->add_option("--method", method, "transfer method")
      ->required()->check(CLI::IsMember(kMethods));
  transfer->add_option("--out", out, "EDBF output")->required();

  auto* evalc = app.add_subcommand("eval", "score trials and report the EER");
  evalc->add_option("--ckpt", ckpt, "checkpoint")->required();
  evalc->add_option("--eval", eval, "target-domain evaluation set")->required();
  evalc->add_option("--trials", trials, "trial list")->required();
  evalc->add_option("--method", method, "transfer method")
      ->required()->check(CLI::IsMember(kMethods));
  evalc->add_option("--scores", scores, "score file to write");
  evalc->add_option("--report", report, "report file to write");

  auto* grad = app.add_subcommand("gradcheck", "finite-difference gradient check");
  grad->add_option("--seed", gc.seed, "model/data seed");
  grad->add_option("--batch", gc.batch, "rows per domain");
  grad->add_option("--step", gc.step, "finite-difference half width");
  grad->add_flag("--corrupt", gc.corrupt, "perturb one analytic gradient (negative control)");

  auto* synth = app.add_subcommand("synth", "generate the synthetic benchmark");
  synth->add_option("--spec", spec, "key=value synth spec");
  synth->add_option("--seed", seed, "overrides the spec seed");
  synth->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*stats) return CmdStats(in, out, std_floor);
    if (*train) return CmdTrain(tar, src, config, variant, seed, epochs, out, log);
    if (*transfer) return CmdTransfer(ckpt, in, method, out);
    if (*evalc) return CmdEval(ckpt, eval, trials, method, scores, report);
    if (*grad) return CmdGradcheck(gc);
    if (*synth) return CmdSynth(spec, seed, out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
