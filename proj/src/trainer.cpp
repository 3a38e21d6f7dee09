// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dccrn/checkpoint.hpp"
#include "dccrn/keyvalue.hpp"
#include "dccrn/optimizer.hpp"
#include "dccrn/targets.hpp"

namespace dccrn {

namespace {

const char* kTrainKeys[] = {
    "train.lr",           "train.beta1",      "train.beta2",
    "train.adam_eps",     "train.lr_decay",   "train.patience",
    "train.batch",        "train.epochs",     "train.seed",
    "train.clip_samples", "train.steps_per_epoch", "train.val_clips",
    "data.speech",        "data.noise",       "data.rir",
    "out.dir"};

bool is_known_train_key(const std::string& k) {
  for (const char* t : kTrainKeys) {
    if (k == t) return true;
  }
  return false;
}

const char* kModelKeys[] = {
    "variant",       "encoder_channels", "kernel_f",        "kernel_t",
    "stride_f",      "stride_t",         "lstm_layers",     "lstm_units",
    "dense_units",   "lookahead_frames", "stft.sample_rate", "stft.win_len",
    "stft.hop",      "stft.fft_len",     "stft.window"};

bool is_known_model_key(const std::string& k) {
  for (const char* t : kModelKeys) {
    if (k == t) return true;
  }
  return false;
}

}  // namespace

ModelConfig model_config_from_kv(const std::map<std::string, std::string>& kv) {
  std::map<std::string, std::string> model_kv;
  for (const auto& [k, v] : kv) {
    if (k.rfind("model.", 0) == 0) {
      const std::string sub = k.substr(6);
      if (!is_known_model_key(sub)) {
        throw UsageError("config: unknown key '" + k + "'");
      }
      model_kv[sub] = v;
    }
  }
  return ModelConfig::from_kv(model_kv);
}

RunConfig RunConfig::from_kv(const std::map<std::string, std::string>& kv) {
  RunConfig c;
  c.model = model_config_from_kv(kv);
  for (const auto& [k, v] : kv) {
    if (k.rfind("model.", 0) == 0) continue;
    if (!is_known_train_key(k)) {
      throw UsageError("config: unknown key '" + k + "'");
    }
    try {
      if (k == "train.lr") c.lr = std::stod(v);
      else if (k == "train.beta1") c.beta1 = std::stod(v);
      else if (k == "train.beta2") c.beta2 = std::stod(v);
      else if (k == "train.adam_eps") c.adam_eps = std::stod(v);
      else if (k == "train.lr_decay") c.lr_decay = std::stod(v);
      else if (k == "train.patience") c.patience = std::stoi(v);
      else if (k == "train.batch") c.batch = std::stoull(v);
      else if (k == "train.epochs") c.epochs = std::stoull(v);
      else if (k == "train.seed") c.seed = std::stoull(v);
      else if (k == "train.clip_samples") c.clip_samples = std::stoull(v);
      else if (k == "train.steps_per_epoch") c.steps_per_epoch = std::stoull(v);
      else if (k == "train.val_clips") c.val_clips = std::stoull(v);
      else if (k == "data.speech") c.speech_list = v;
      else if (k == "data.noise") c.noise_list = v;
      else if (k == "data.rir") c.rir_list = v;
      else if (k == "out.dir") c.out_dir = v;
    } catch (const std::invalid_argument&) {
      throw UsageError("config: bad value for '" + k + "': '" + v + "'");
    } catch (const std::out_of_range&) {
      throw UsageError("config: value out of range for '" + k + "'");
    }
  }
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  return from_kv(read_kv_file(path));
}

void RunConfig::validate() const {
  model.validate();
  if (lr <= 0) throw UsageError("config: train.lr must be > 0");
  if (patience < 1) throw UsageError("config: train.patience must be >= 1");
  if (batch < 1 || epochs < 1 || steps_per_epoch < 1 || val_clips < 1) {
    throw UsageError("config: batch/epochs/steps/val_clips must be >= 1");
  }
  if (clip_samples < static_cast<size_t>(model.stft.win_len)) {
    throw UsageError("config: train.clip_samples shorter than one window");
  }
  if (speech_list.empty() || noise_list.empty()) {
    throw UsageError("config: data.speech and data.noise are required");
  }
  for (const std::string* p : {&speech_list, &noise_list}) {
    if (!std::filesystem::exists(*p)) {
      throw UsageError("config: list file does not exist: '" + *p + "'");
    }
  }
  if (!rir_list.empty() && !std::filesystem::exists(rir_list)) {
    throw UsageError("config: list file does not exist: '" + rir_list + "'");
  }
}

namespace {

struct Batch {
  ComplexTensor<float> noisy;  // [B x L]
  ComplexTensor<float> clean;
};

Batch make_batch(const std::vector<Mixture>& items) {
  const size_t batch = items.size();
  const size_t len = items[0].mixture.samples.size();
  Batch b{ComplexTensor<float>({batch, len}), ComplexTensor<float>({batch, len})};
  for (size_t i = 0; i < batch; ++i) {
    for (size_t j = 0; j < len; ++j) {
      b.noisy.re[i * len + j] = items[i].mixture.samples[j];
      b.clean.re[i * len + j] = items[i].clean.samples[j];
    }
  }
  return b;
}

void emit_record(std::ostream* s, std::ofstream& f, size_t epoch,
                 const char* split, double sisnr, double lr) {
  std::ostringstream line;
  line << "epoch=" << epoch << " split=" << split << " sisnr=" << std::fixed
       << std::setprecision(4) << sisnr << " lr=" << std::setprecision(6)
       << lr;
  f << line.str() << "\n";
  f.flush();
  if (s) (*s) << line.str() << "\n";
}

}  // namespace

TrainResult train_model(const RunConfig& cfg, std::ostream* log_stream) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream metrics(cfg.out_dir + "/metrics.log");
  if (!metrics) {
    throw DataError("trainer: cannot write metrics log in '" + cfg.out_dir +
                    "'");
  }

  Model<float> model = Model<float>::build(cfg.model, cfg.seed);
  LOG_INFO("training " << variant_name(cfg.model.variant) << " model, "
                       << model.param_count() << " parameters");

  Manifest manifest =
      Manifest::load(cfg.speech_list, cfg.noise_list, cfg.rir_list);

  DynamicMixer::Options mix_opts;
  mix_opts.fixed_len = cfg.clip_samples;

  // Fixed validation set drawn once from a dedicated seed.
  std::vector<Mixture> val_set;
  {
    DynamicMixer val_mix(manifest, cfg.seed ^ 0x9e3779b97f4a7c15ull, mix_opts);
    val_mix.set_epoch_size(cfg.val_clips);
    while (auto m = val_mix.next()) val_set.push_back(std::move(*m));
  }

  typename Adam<float>::Options adam_opts;
  adam_opts.lr = static_cast<float>(cfg.lr);
  adam_opts.beta1 = static_cast<float>(cfg.beta1);
  adam_opts.beta2 = static_cast<float>(cfg.beta2);
  adam_opts.eps = static_cast<float>(cfg.adam_eps);
  Adam<float> adam(model.param_vars(), adam_opts);

  LrSchedule schedule{cfg.lr, cfg.lr_decay, cfg.patience};

  TrainResult result;
  result.best_val_sisnr_db = -std::numeric_limits<double>::infinity();
  result.best_checkpoint = cfg.out_dir + "/best.ckpt";
  result.last_checkpoint = cfg.out_dir + "/last.ckpt";

  for (size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    DynamicMixer train_mix(manifest, cfg.seed + epoch, mix_opts);
    train_mix.set_epoch_size(cfg.steps_per_epoch * cfg.batch);
    double train_sisnr_acc = 0.0;
    size_t steps = 0;
    for (size_t step = 0; step < cfg.steps_per_epoch; ++step) {
      std::vector<Mixture> items;
      while (items.size() < cfg.batch) {
        auto m = train_mix.next();
        if (!m) break;
        items.push_back(std::move(*m));
      }
      if (items.empty()) break;
      Batch b = make_batch(items);
      ag::Var<float> noisy = ag::constant(std::move(b.noisy));
      ag::Var<float> clean = ag::constant(std::move(b.clean));
      ag::Var<float> enhanced = model.forward_wave(noisy, true);
      ag::Var<float> loss = loss_sisnr(enhanced, clean);
      adam.zero_grad();
      ag::backward(loss);
      adam.step();
      train_sisnr_acc += -static_cast<double>(loss->value.re[0]);
      ++steps;
    }
    const double train_sisnr = steps ? train_sisnr_acc / steps : 0.0;

    double val_sisnr_acc = 0.0;
    for (const auto& item : val_set) {
      auto out = model.enhance(item.mixture.samples);
      std::vector<float> clean_ref(item.clean.samples.begin(),
                                   item.clean.samples.end());
      val_sisnr_acc += si_snr_db(out.wave, clean_ref);
    }
    const double val_sisnr = val_sisnr_acc / val_set.size();
    const double val_loss = -val_sisnr;

    emit_record(log_stream, metrics, epoch, "train", train_sisnr, adam.lr());
    emit_record(log_stream, metrics, epoch, "val", val_sisnr, adam.lr());
    result.log.push_back({epoch, train_sisnr, val_sisnr, adam.lr()});
    result.epochs_run = epoch;

    save_checkpoint(result.last_checkpoint, model);
    if (val_sisnr > result.best_val_sisnr_db) {
      result.best_val_sisnr_db = val_sisnr;
      save_checkpoint(result.best_checkpoint, model);
    }

    schedule.on_validation(val_loss);
    adam.set_lr(static_cast<float>(schedule.lr));
    if (schedule.should_stop) {
      LOG_INFO("early stop after epoch " << epoch);
      break;
    }
  }
  if (!std::filesystem::exists(result.best_checkpoint)) {
    save_checkpoint(result.best_checkpoint, model);
  }
  return result;
}

}  // namespace dccrn
