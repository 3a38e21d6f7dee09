// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>
#include <vector>

#include "dccrn/model.hpp"

namespace dccrn {

struct CheckResult {
  std::string name;
  bool ok = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;  // e.g. "max rel err", "dB"
};

/// Two-block toy configuration (16/32 total channels) used for gradient
/// checks and fast probes.
ModelConfig tiny_config(Variant v);

// Gradient checks run in 64-bit against central finite differences
// (step 1e-5, bound 1e-4 relative).
CheckResult check_grad_elementwise(uint64_t seed);
CheckResult check_grad_conv(uint64_t seed);
CheckResult check_grad_conv_transpose(uint64_t seed);
CheckResult check_grad_batch_norm(uint64_t seed);
CheckResult check_grad_lstm(uint64_t seed);
CheckResult check_grad_dense(uint64_t seed);
CheckResult check_grad_prelu(uint64_t seed);
CheckResult check_grad_stft(uint64_t seed);
CheckResult check_grad_sisnr(uint64_t seed);
/// Full tiny-model loss, `samples` randomly chosen parameter coordinates.
CheckResult check_grad_tiny_model(uint64_t seed, Variant v, size_t samples);

// Brute-force scalar oracles (64-bit, bound 1e-10 unless noted).
CheckResult check_conv_oracle(uint64_t seed);
CheckResult check_conv_adjoint(uint64_t seed);   // bound 1e-8
CheckResult check_lstm_oracle(uint64_t seed);
CheckResult check_dense_oracle(uint64_t seed);

// Model-level probes (32-bit, production path).
CheckResult check_causality(uint64_t seed);
CheckResult check_stream_schedule(uint64_t seed);
CheckResult check_streaming_equivalence(uint64_t seed, Variant v,
                                        double seconds);
CheckResult check_crm_reconstruction(uint64_t seed, size_t mixtures);
CheckResult check_stft_roundtrip(uint64_t seed);
CheckResult check_stft_dft_oracle(uint64_t seed);

/// The fixed suite behind the `verify` command.
std::vector<CheckResult> run_verification(uint64_t seed = 7);

std::string format_check(const CheckResult& r);

}  // namespace dccrn
