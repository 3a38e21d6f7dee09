// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"

#include "dccrn/checkpoint.hpp"
#include "dccrn/keyvalue.hpp"
#include "dccrn/synth.hpp"
#include "dccrn/trainer.hpp"
#include "dccrn/verify.hpp"

namespace {

using namespace dccrn;

int cmd_train(const std::string& config_path) {
  RunConfig cfg = RunConfig::from_file(config_path);
  TrainResult result = train_model(cfg, &std::cout);
  std::cout << "best_checkpoint=" << result.best_checkpoint
            << " best_val_sisnr=" << std::fixed << std::setprecision(3)
            << result.best_val_sisnr_db << " epochs=" << result.epochs_run
            << "\n";
  return 0;
}

int cmd_enhance(const std::string& ckpt, const std::string& in_path,
                const std::string& out_path, bool streaming) {
  Model<float> model = load_checkpoint(ckpt);
  AudioClip in = read_wav(in_path);
  validate_clip(in, in_path, model.config().stft.sample_rate);

  std::vector<float> enhanced;
  if (!streaming) {
    enhanced = model.enhance(in.samples).wave;
  } else {
    const size_t hop = model.config().stft.hop;
    auto st = model.open_stream();
    std::vector<float> padded = in.samples;
    padded.resize((padded.size() + hop - 1) / hop * hop, 0.0f);
    for (size_t pos = 0; pos < padded.size(); pos += hop) {
      std::vector<float> chunk(padded.begin() + pos,
                               padded.begin() + pos + hop);
      if (auto out = model.push_chunk(st, chunk)) {
        enhanced.insert(enhanced.end(), out->begin(), out->end());
      }
    }
    std::vector<float> tail = model.flush_chunks(st);
    enhanced.insert(enhanced.end(), tail.begin(), tail.end());
    enhanced.resize(in.samples.size());
  }
  write_wav(out_path, AudioClip{enhanced, in.sample_rate});
  std::cout << "wrote " << out_path << " (" << enhanced.size() << " samples, "
            << (streaming ? "streaming" : "offline") << ")\n";
  return 0;
}

int cmd_bench(const std::string& ckpt, double seconds) {
  Model<float> model = load_checkpoint(ckpt);
  const size_t hop = model.config().stft.hop;
  const int rate = model.config().stft.sample_rate;
  Rng rng(11);
  {
    // make sure eval-mode normalization statistics exist
    try {
      auto probe = model.open_stream();
      ComplexTensor<float> col({model.config().stft.bins() - 1});
      model.push_spec_frame(probe, col);
    } catch (const DataError&) {
      model.prime_norm(synth_white_noise(rng, 4 * hop + 8000, 0.1));
    }
  }
  const size_t chunks = std::max<size_t>(
      16, static_cast<size_t>(seconds * rate) / hop);
  std::vector<float> audio =
      synth_white_noise(rng, chunks * hop, 0.1);

  auto st = model.open_stream();
  std::vector<double> times_ms;
  times_ms.reserve(chunks);
  for (size_t i = 0; i < chunks; ++i) {
    std::vector<float> chunk(audio.begin() + i * hop,
                             audio.begin() + (i + 1) * hop);
    auto t0 = std::chrono::steady_clock::now();
    (void)model.push_chunk(st, chunk);
    auto t1 = std::chrono::steady_clock::now();
    if (i >= 12) {  // steady state: one full frame of work per push
      times_ms.push_back(
          std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
  }
  std::sort(times_ms.begin(), times_ms.end());
  double mean = 0;
  for (double t : times_ms) mean += t;
  mean /= times_ms.size();
  const double p95 = times_ms[static_cast<size_t>(0.95 * (times_ms.size() - 1))];
  const double hop_ms = 1000.0 * hop / rate;
  const double look_ahead_ms =
      1000.0 * model.config().lookahead_frames * hop / rate;
  std::cout << std::fixed << std::setprecision(3);
  std::cout << "frames=" << times_ms.size() << " mean_ms=" << mean
            << " p95_ms=" << p95 << " hop_ms=" << hop_ms
            << " rtf=" << mean / hop_ms << "\n";
  std::cout << "look_ahead_ms=" << std::setprecision(2) << look_ahead_ms
            << " (fixed pipeline look-ahead: "
            << model.config().lookahead_frames << " frames)\n";
  return 0;
}

int cmd_verify(uint64_t seed) {
  bool all_ok = true;
  for (const auto& r : run_verification(seed)) {
    std::cout << format_check(r) << "\n";
    all_ok = all_ok && r.ok;
  }
  if (!all_ok) {
    std::cerr << "error: verification failed\n";
    return 3;
  }
  std::cout << "all checks passed\n";
  return 0;
}

int cmd_param_count(const std::string& config_path) {
  auto kv = read_kv_file(config_path);
  ModelConfig mc = model_config_from_kv(kv);
  Model<float> model = Model<float>::build(mc);
  std::cout << "variant=" << variant_name(mc.variant)
            << " params=" << model.param_count() << " params_millions="
            << std::fixed << std::setprecision(3)
            << model.param_count() / 1e6 << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DCCRN speech enhancement"};
  app.require_subcommand(1);

  std::string config_path, ckpt, in_path, out_path;
  bool streaming = false;
  double seconds = 4.0;
  uint64_t seed = 7;

  auto* train = app.add_subcommand("train", "train a model from a config file");
  train->add_option("config", config_path, "key=value run configuration")
      ->required();

  auto* enhance = app.add_subcommand("enhance", "denoise a WAV file");
  enhance->add_option("checkpoint", ckpt)->required();
  enhance->add_option("input", in_path)->required();
  enhance->add_option("output", out_path)->required();
  enhance->add_flag("--streaming", streaming,
                    "frame-by-frame inference instead of offline");

  auto* bench = app.add_subcommand("bench", "per-frame latency report");
  bench->add_option("checkpoint", ckpt)->required();
  bench->add_option("--seconds", seconds, "length of the synthetic stream");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--seed", seed);

  auto* params = app.add_subcommand("param-count",
                                    "report the parameter count of a config");
  params->add_option("config", config_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (train->parsed()) return cmd_train(config_path);
    if (enhance->parsed()) return cmd_enhance(ckpt, in_path, out_path, streaming);
    if (bench->parsed()) return cmd_bench(ckpt, seconds);
    if (verify->parsed()) return cmd_verify(seed);
    if (params->parsed()) return cmd_param_count(config_path);
  } catch (const dccrn::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dccrn::VerifyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
