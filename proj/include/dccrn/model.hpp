// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dccrn/layers.hpp"
#include "dccrn/stft.hpp"
#include "dccrn/targets.hpp"

namespace dccrn {

enum class Variant { R, C, E, CL };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& s);

struct ModelConfig {
  Variant variant = Variant::E;
  // Total real-plane channels per encoder block; each complex pair counts
  // as two. {32,64,128,128,256,256} for R/C/E, {32,64,128,256,256,256} for CL.
  std::vector<size_t> encoder_channels = {32, 64, 128, 128, 256, 256};
  size_t kernel_f = 5, kernel_t = 2;
  size_t stride_f = 2, stride_t = 1;
  size_t lstm_layers = 2;
  size_t lstm_units = 256;    // total width; the complex LSTM uses half per plane
  size_t dense_units = 1024;  // recurrent head output width = channels * freq
  size_t lookahead_frames = 6;
  StftConfig stft;

  static ModelConfig defaults(Variant v);
  size_t depth() const { return encoder_channels.size(); }
  void validate() const;

  std::map<std::string, std::string> to_kv() const;
  static ModelConfig from_kv(const std::map<std::string, std::string>& kv);
};

/// Cached temporal context for frame-by-frame inference. Single-stream,
/// single-thread; bound to the model instance that created it.
template <typename S>
struct StreamState {
  uint64_t model_id = 0;

  // analyzer
  std::vector<S> pending;  // received samples not yet consumed by framing
  size_t pending_base = 0; // absolute index of pending[0]
  size_t samples_in = 0;
  size_t frames_made = 0;

  // encoder causal context: previous input frame per layer
  std::vector<ComplexTensor<S>> enc_prev;

  // recurrent states
  std::vector<LstmState<S>> lstm_states;
  std::vector<ComplexLstmState<S>> clstm_states;

  // decoder look-ahead buffers and per-layer delayed skip frames
  std::vector<ComplexTensor<S>> dec_prev;
  std::vector<std::deque<ComplexTensor<S>>> skips;

  std::deque<ComplexTensor<S>> noisy_frames;  // DC-removed columns awaiting masks
  size_t frames_pushed = 0;
  size_t frames_emitted = 0;

  // synthesis overlap-add
  std::vector<S> ola;
  size_t enhanced_frames = 0;
  size_t chunks_emitted = 0;
  bool flushed = false;
};

/// Encoder -> recurrent core -> decoder with skip connections, complex
/// ratio masking, and offline plus streaming inference. The decoder looks
/// ahead one frame per layer; the encoder is strictly causal.
template <typename S>
class Model {
 public:
  Model() = default;

  static Model build(const ModelConfig& config, uint64_t seed = 1);

  const ModelConfig& config() const { return config_; }
  const StftTransform<S>& stft() const { return stft_; }
  uint64_t instance_id() const { return id_; }

  size_t param_count() const;
  ParamList<S> named_params() const;
  std::vector<ag::Var<S>> param_vars() const;
  BufferList<S> buffers();

  /// Mask estimation on a DC-removed spectrogram batch [B x F0 x T].
  ag::Var<S> mask_from_spec(const ag::Var<S>& y, bool train);

  /// Full differentiable pipeline: wave [B x L] -> enhanced wave [B x L].
  ag::Var<S> forward_wave(const ag::Var<S>& wave, bool train);

  struct EnhanceResult {
    ComplexTensor<S> mask;  // [F0 x T]
    std::vector<S> wave;
  };
  /// Offline inference (eval-mode normalization, no graph).
  EnhanceResult enhance(const std::vector<S>& wave);

  /// One train-mode pass to populate normalization statistics (no graph).
  void prime_norm(const std::vector<S>& wave);

  // --- streaming ---
  StreamState<S> open_stream() const;

  /// Frame-domain core: push one DC-removed noisy frame column [F0];
  /// the first lookahead_frames pushes return nothing, push t then emits
  /// enhanced frame t - lookahead_frames.
  std::optional<ComplexTensor<S>> push_spec_frame(StreamState<S>& st,
                                                  const ComplexTensor<S>& col);
  /// Drain the decoder look-ahead with zero padding.
  std::vector<ComplexTensor<S>> flush_spec_frames(StreamState<S>& st);

  /// Sample-domain wrapper: hop-sized chunk in, hop-sized chunk out. On
  /// top of the frame-domain look-ahead this buffers the window overlap
  /// (win/hop - 1 additional chunks before the first emission).
  std::optional<std::vector<S>> push_chunk(StreamState<S>& st,
                                           const std::vector<S>& chunk);
  /// Remaining output so the stream totals exactly the input length. On a
  /// stream that never received input, emits lookahead_frames hops of
  /// silence (idle pipeline drain).
  std::vector<S> flush_chunks(StreamState<S>& st);

 private:
  struct EncoderBlock {
    ComplexConv2d<S> conv;
    ComplexBatchNorm<S> bn;
    PRelu<S> act;
  };
  struct DecoderBlock {
    ComplexConvTranspose2d<S> conv;
    ComplexBatchNorm<S> bn;  // absent on the last block
    PRelu<S> act;
    bool has_post = true;
  };

  ag::Var<S> encode_offline(const ag::Var<S>& x, bool train,
                            std::vector<ag::Var<S>>* skips);
  ag::Var<S> core_offline(const ag::Var<S>& enc_out, bool train);
  ag::Var<S> core_step(const ag::Var<S>& enc_out, StreamState<S>& st);
  ag::Var<S> core_apply(const ag::Var<S>& enc_out, bool train,
                        std::vector<LstmState<S>>* ls,
                        std::vector<ComplexLstmState<S>>* cs);
  std::optional<ComplexTensor<S>> decoder_cascade(StreamState<S>& st,
                                                  ComplexTensor<S> input,
                                                  size_t start_layer);

  ModelConfig config_;
  StftTransform<S> stft_;
  uint64_t id_ = 0;

  std::vector<EncoderBlock> encoder_;
  std::vector<DecoderBlock> decoder_;
  std::vector<LstmLayer<S>> lstm_;              // R/C/E core
  std::vector<ComplexLstmLayer<S>> clstm_;      // CL core
  Dense<S> dense_;                              // R/C/E head
  ComplexDense<S> cdense_;                      // CL head

  // cached geometry (complex channel counts and frequency sizes)
  std::vector<size_t> enc_in_cc_, enc_out_cc_, enc_f_in_;
  std::vector<size_t> dec_in_cc_, dec_out_cc_, dec_f_in_;
  size_t core_f_ = 0, core_cc_ = 0;
};

/// Mask application patterns. R masks the planes independently, C is the
/// complex product, E/CL apply a magnitude-bounded polar mask.
template <typename S>
ag::Var<S> apply_mask(const ag::Var<S>& noisy, const ag::Var<S>& mask,
                      Variant v);

/// Polar form shared by E/CL; `bound_magnitude` switches the tanh bound
/// (identity exposes the algebraic equivalence with the complex product).
template <typename S>
ag::Var<S> apply_mask_polar(const ag::Var<S>& noisy, const ag::Var<S>& mask,
                            bool bound_magnitude);

template <typename S>
ComplexTensor<S> apply_mask_raw(const ComplexTensor<S>& noisy,
                                const ComplexTensor<S>& mask, Variant v);

}  // namespace dccrn
