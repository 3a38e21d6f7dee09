// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dccrn/mixer.hpp"
#include "dccrn/model.hpp"

namespace dccrn {

struct RunConfig {
  ModelConfig model;

  double lr = 1e-3;
  double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  double lr_decay = 0.5;
  int patience = 5;
  size_t batch = 4;
  size_t epochs = 8;
  uint64_t seed = 1;
  size_t clip_samples = 16000;
  size_t steps_per_epoch = 50;
  size_t val_clips = 16;

  std::string speech_list, noise_list, rir_list;
  std::string out_dir = ".";

  static RunConfig from_kv(const std::map<std::string, std::string>& kv);
  static RunConfig from_file(const std::string& path);
  void validate() const;
};

/// Parses only the model.* keys of a config map.
ModelConfig model_config_from_kv(const std::map<std::string, std::string>& kv);

struct EpochRecord {
  size_t epoch;
  double train_sisnr_db;
  double val_sisnr_db;
  double lr;
};

struct TrainResult {
  std::vector<EpochRecord> log;
  std::string best_checkpoint;
  std::string last_checkpoint;
  double best_val_sisnr_db;
  size_t epochs_run;
};

/// Dynamic-mixing training loop: Adam, validation after every epoch,
/// learning rate halved when validation loss rises, early stopping, best
/// checkpoint retained. Metric records go to `log_stream` (when given) and
/// to <out_dir>/metrics.log as `epoch=<n> split=<train|val> sisnr=<dB>
/// lr=<v>` lines.
TrainResult train_model(const RunConfig& cfg, std::ostream* log_stream);

}  // namespace dccrn
