// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/model.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace dccrn {

namespace {
std::atomic<uint64_t> g_model_counter{1};

size_t parse_size(const std::string& s) {
  return static_cast<size_t>(std::stoull(s));
}
}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::R: return "R";
    case Variant::C: return "C";
    case Variant::E: return "E";
    case Variant::CL: return "CL";
  }
  return "?";
}

Variant variant_from_name(const std::string& s) {
  if (s == "R") return Variant::R;
  if (s == "C") return Variant::C;
  if (s == "E") return Variant::E;
  if (s == "CL") return Variant::CL;
  throw DataError("unknown model variant '" + s + "' (expected R, C, E, CL)");
}

ModelConfig ModelConfig::defaults(Variant v) {
  ModelConfig c;
  c.variant = v;
  if (v == Variant::CL) {
    c.encoder_channels = {32, 64, 128, 256, 256, 256};
  }
  return c;
}

void ModelConfig::validate() const {
  if (encoder_channels.empty()) {
    throw DataError("model config: encoder_channels must not be empty");
  }
  for (size_t c : encoder_channels) {
    if (c < 2 || c % 2 != 0) {
      throw DataError(
          "model config: channel counts are total real-plane channels and "
          "must be even and >= 2");
    }
  }
  if (kernel_f % 2 == 0) {
    throw DataError("model config: kernel_f must be odd");
  }
  if (kernel_t != 2 || stride_t != 1 || stride_f != 2) {
    throw DataError(
        "model config: this architecture requires kernel_t=2, stride=(2,1)");
  }
  const size_t f0 = stft.bins() - 1;
  const size_t d = depth();
  if (d >= 16 || f0 % (size_t(1) << d) != 0 || (f0 >> d) == 0) {
    throw DataError("model config: " + std::to_string(f0) +
                    " frequency bins cannot be halved " + std::to_string(d) +
                    " times");
  }
  if (lookahead_frames != d) {
    throw DataError(
        "model config: lookahead_frames must equal the encoder depth (one "
        "look-ahead frame per decoder layer), got " +
        std::to_string(lookahead_frames) + " vs depth " + std::to_string(d));
  }
  const double lookahead_ms =
      1000.0 * lookahead_frames * stft.hop / stft.sample_rate;
  if (lookahead_ms > 40.0) {
    throw DataError("model config: look-ahead " + std::to_string(lookahead_ms) +
                    " ms exceeds the 40 ms real-time budget");
  }
  if (lstm_layers == 0 || lstm_units < 2 || lstm_units % 2 != 0) {
    throw DataError("model config: lstm_units must be even and >= 2");
  }
  const size_t flat = encoder_channels.back() * (f0 >> d);
  if (dense_units != flat) {
    throw DataError("model config: dense_units must equal channels*freq at "
                    "the encoder output (" +
                    std::to_string(flat) + "), got " +
                    std::to_string(dense_units));
  }
}

std::map<std::string, std::string> ModelConfig::to_kv() const {
  std::map<std::string, std::string> kv;
  kv["variant"] = variant_name(variant);
  std::ostringstream ch;
  for (size_t i = 0; i < encoder_channels.size(); ++i) {
    if (i) ch << ",";
    ch << encoder_channels[i];
  }
  kv["encoder_channels"] = ch.str();
  kv["kernel_f"] = std::to_string(kernel_f);
  kv["kernel_t"] = std::to_string(kernel_t);
  kv["stride_f"] = std::to_string(stride_f);
  kv["stride_t"] = std::to_string(stride_t);
  kv["lstm_layers"] = std::to_string(lstm_layers);
  kv["lstm_units"] = std::to_string(lstm_units);
  kv["dense_units"] = std::to_string(dense_units);
  kv["lookahead_frames"] = std::to_string(lookahead_frames);
  kv["stft.sample_rate"] = std::to_string(stft.sample_rate);
  kv["stft.win_len"] = std::to_string(stft.win_len);
  kv["stft.hop"] = std::to_string(stft.hop);
  kv["stft.fft_len"] = std::to_string(stft.fft_len);
  kv["stft.window"] = stft.window == StftConfig::Window::kSqrtHann
                          ? "sqrt_hann"
                          : (stft.window == StftConfig::Window::kHann
                                 ? "hann"
                                 : "rect");
  return kv;
}

ModelConfig ModelConfig::from_kv(const std::map<std::string, std::string>& kv) {
  ModelConfig c;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto* v = get("variant")) c.variant = variant_from_name(*v);
  if (auto* v = get("encoder_channels")) {
    c.encoder_channels.clear();
    std::istringstream is(*v);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (!tok.empty()) c.encoder_channels.push_back(parse_size(tok));
    }
  }
  if (auto* v = get("kernel_f")) c.kernel_f = parse_size(*v);
  if (auto* v = get("kernel_t")) c.kernel_t = parse_size(*v);
  if (auto* v = get("stride_f")) c.stride_f = parse_size(*v);
  if (auto* v = get("stride_t")) c.stride_t = parse_size(*v);
  if (auto* v = get("lstm_layers")) c.lstm_layers = parse_size(*v);
  if (auto* v = get("lstm_units")) c.lstm_units = parse_size(*v);
  if (auto* v = get("dense_units")) c.dense_units = parse_size(*v);
  if (auto* v = get("lookahead_frames")) c.lookahead_frames = parse_size(*v);
  if (auto* v = get("stft.sample_rate")) c.stft.sample_rate = std::stoi(*v);
  if (auto* v = get("stft.win_len")) c.stft.win_len = std::stoi(*v);
  if (auto* v = get("stft.hop")) c.stft.hop = std::stoi(*v);
  if (auto* v = get("stft.fft_len")) c.stft.fft_len = std::stoi(*v);
  if (auto* v = get("stft.window")) {
    if (*v == "sqrt_hann") c.stft.window = StftConfig::Window::kSqrtHann;
    else if (*v == "hann") c.stft.window = StftConfig::Window::kHann;
    else if (*v == "rect") c.stft.window = StftConfig::Window::kRect;
    else throw DataError("unknown stft window '" + *v + "'");
  }
  return c;
}

// --- mask application ---

template <typename S>
ag::Var<S> apply_mask_polar(const ag::Var<S>& noisy, const ag::Var<S>& mask,
                            bool bound_magnitude) {
  using namespace ag;
  Var<S> y_mag = magnitude(noisy);
  Var<S> m_mag = magnitude(mask);
  if (bound_magnitude) m_mag = tanh_re(m_mag);
  Var<S> theta = cadd(phase(noisy), phase(mask));
  Var<S> mag = cmul(y_mag, m_mag);
  return combine(cmul(mag, cos_re(theta)), cmul(mag, sin_re(theta)));
}

template <typename S>
ag::Var<S> apply_mask(const ag::Var<S>& noisy, const ag::Var<S>& mask,
                      Variant v) {
  using namespace ag;
  if (!(noisy->value.shape() == mask->value.shape())) {
    throw ShapeError("apply_mask: spectrogram " +
                     shape_str(noisy->value.shape()) + " vs mask " +
                     shape_str(mask->value.shape()));
  }
  switch (v) {
    case Variant::R:
      return combine(cmul(real_plane(noisy), real_plane(mask)),
                     cmul(imag_plane(noisy), imag_plane(mask)));
    case Variant::C:
      return cmul(noisy, mask);
    case Variant::E:
    case Variant::CL:
      return apply_mask_polar(noisy, mask, true);
  }
  throw DataError("apply_mask: unknown variant");
}

template <typename S>
ComplexTensor<S> apply_mask_raw(const ComplexTensor<S>& noisy,
                                const ComplexTensor<S>& mask, Variant v) {
  ag::NoGradGuard guard;
  return apply_mask(ag::constant(noisy), ag::constant(mask), v)->value;
}

// --- build ---

template <typename S>
Model<S> Model<S>::build(const ModelConfig& config, uint64_t seed) {
  config.validate();
  Model<S> m;
  m.config_ = config;
  m.stft_ = StftTransform<S>(config.stft);
  m.id_ = g_model_counter.fetch_add(1);
  Rng rng(seed);

  const size_t depth = config.depth();
  const size_t f0 = config.stft.bins() - 1;

  std::vector<size_t> cc(depth);
  for (size_t i = 0; i < depth; ++i) cc[i] = config.encoder_channels[i] / 2;

  ag::ConvGeom enc_geom;
  enc_geom.kf = config.kernel_f;
  enc_geom.kt = config.kernel_t;
  enc_geom.sf = config.stride_f;
  enc_geom.st = config.stride_t;
  enc_geom.pf_lo = enc_geom.pf_hi = (config.kernel_f - 1) / 2;
  enc_geom.pt_lo = config.kernel_t - 1;  // causal
  enc_geom.pt_hi = 0;

  m.encoder_.resize(depth);
  size_t in_c = 1;
  size_t f = f0;
  for (size_t i = 0; i < depth; ++i) {
    const std::string name = "enc" + std::to_string(i);
    m.enc_in_cc_.push_back(in_c);
    m.enc_out_cc_.push_back(cc[i]);
    m.enc_f_in_.push_back(f);
    m.encoder_[i].conv.init(cc[i], in_c, enc_geom, name + ".conv", rng);
    m.encoder_[i].bn.init(cc[i], name + ".bn", rng);
    m.encoder_[i].act.init(cc[i], name + ".prelu");
    in_c = cc[i];
    f = enc_geom.conv_out(f, enc_geom.kf, enc_geom.sf, enc_geom.pf_lo,
                          enc_geom.pf_hi);
  }
  m.core_f_ = f;
  m.core_cc_ = cc.back();

  const size_t flat_total = config.encoder_channels.back() * m.core_f_;
  if (config.variant == Variant::CL) {
    const size_t plane_width = flat_total / 2;
    const size_t hid = config.lstm_units / 2;
    m.clstm_.resize(config.lstm_layers);
    size_t w = plane_width;
    for (size_t i = 0; i < config.lstm_layers; ++i) {
      m.clstm_[i].init(w, hid, "core.clstm" + std::to_string(i), rng);
      w = hid;
    }
    m.cdense_.init(hid, config.dense_units / 2, "core.cdense", rng);
  } else {
    m.lstm_.resize(config.lstm_layers);
    size_t w = flat_total;
    for (size_t i = 0; i < config.lstm_layers; ++i) {
      m.lstm_[i].init(w, config.lstm_units, "core.lstm" + std::to_string(i),
                      rng);
      w = config.lstm_units;
    }
    m.dense_.init(config.lstm_units, config.dense_units, "core.dense", rng);
  }

  // Transposed-conv padding crops so stride-2 exactly doubles the
  // frequency size; pt_lo = 1 drops the leading raw frame, which makes
  // every decoder layer consume one future frame.
  ag::ConvGeom dec_geom = enc_geom;
  dec_geom.pf_lo = (config.kernel_f - 1) / 2;
  dec_geom.pf_hi = (config.kernel_f - 1) / 2 - 1;
  dec_geom.pt_lo = 1;
  dec_geom.pt_hi = 0;

  m.decoder_.resize(depth);
  for (size_t j = 0; j < depth; ++j) {
    const std::string name = "dec" + std::to_string(j);
    const size_t dec_in =
        j == 0 ? m.core_cc_ : m.dec_out_cc_[j - 1] + cc[depth - 1 - j];
    const size_t dec_out = j + 1 < depth ? cc[depth - 2 - j] : 1;
    m.dec_in_cc_.push_back(dec_in);
    m.dec_out_cc_.push_back(dec_out);
    m.dec_f_in_.push_back(f0 >> (depth - j));
    m.decoder_[j].conv.init(dec_in, dec_out, dec_geom, name + ".conv", rng);
    m.decoder_[j].has_post = (j + 1 < depth);
    if (m.decoder_[j].has_post) {
      m.decoder_[j].bn.init(dec_out, name + ".bn", rng);
      m.decoder_[j].act.init(dec_out, name + ".prelu");
    }
  }
  return m;
}

template <typename S>
ParamList<S> Model<S>::named_params() const {
  ParamList<S> out;
  for (const auto& blk : encoder_) {
    blk.conv.collect("", out);
    blk.bn.collect("", out);
    blk.act.collect("", out);
  }
  if (config_.variant == Variant::CL) {
    for (const auto& l : clstm_) l.collect("", out);
    cdense_.collect("", out);
  } else {
    for (const auto& l : lstm_) l.collect("", out);
    dense_.collect("", out);
  }
  for (const auto& blk : decoder_) {
    blk.conv.collect("", out);
    if (blk.has_post) {
      blk.bn.collect("", out);
      blk.act.collect("", out);
    }
  }
  return out;
}

template <typename S>
std::vector<ag::Var<S>> Model<S>::param_vars() const {
  std::vector<ag::Var<S>> out;
  for (const auto& p : named_params()) out.push_back(p.var);
  return out;
}

template <typename S>
size_t Model<S>::param_count() const {
  size_t n = 0;
  for (const auto& p : named_params()) {
    n += (p.is_complex ? 2 : 1) * p.var->value.numel();
  }
  return n;
}

template <typename S>
BufferList<S> Model<S>::buffers() {
  BufferList<S> out;
  for (size_t i = 0; i < encoder_.size(); ++i) {
    encoder_[i].bn.collect_buffers("enc" + std::to_string(i) + ".bn", out);
  }
  for (size_t j = 0; j < decoder_.size(); ++j) {
    if (decoder_[j].has_post) {
      decoder_[j].bn.collect_buffers("dec" + std::to_string(j) + ".bn", out);
    }
  }
  return out;
}

// --- offline forward ---

template <typename S>
ag::Var<S> Model<S>::encode_offline(const ag::Var<S>& x, bool train,
                                    std::vector<ag::Var<S>>* skips) {
  ag::Var<S> h = x;
  for (auto& blk : encoder_) {
    h = blk.conv.forward(h);
    h = blk.bn.forward(h, train);
    h = blk.act.forward(h);
    if (skips) skips->push_back(h);
  }
  return h;
}

template <typename S>
ag::Var<S> Model<S>::core_apply(const ag::Var<S>& enc_out, bool train,
                                std::vector<LstmState<S>>* ls,
                                std::vector<ComplexLstmState<S>>* cs) {
  using namespace ag;
  (void)train;
  const auto& shape = enc_out->value.shape();
  const size_t batch = shape[0], chan = shape[1], freq = shape[2],
               frames = shape[3];
  const size_t width = chan * freq;
  Var<S> tm = permute(enc_out, {3, 0, 1, 2});       // [T,B,C,F]
  tm = reshape(tm, {frames, batch, width});

  Var<S> out;
  if (config_.variant == Variant::CL) {
    Var<S> re = real_plane(tm);
    Var<S> im = imag_plane(tm);
    for (size_t i = 0; i < clstm_.size(); ++i) {
      auto pair = clstm_[i].forward(re, im, cs ? &(*cs)[i] : nullptr);
      re = pair.first;
      im = pair.second;
    }
    Var<S> x = combine(re, im);
    x = reshape(x, {frames * batch, x->value.dim(2)});
    Var<S> d = cdense_.forward(x);                  // [T*B, width] complex
    out = reshape(d, {frames, batch, width});
  } else {
    Var<S> x = concat<S>({real_plane(tm), imag_plane(tm)}, 2);
    for (size_t i = 0; i < lstm_.size(); ++i) {
      x = lstm_[i].forward(x, ls ? &(*ls)[i] : nullptr);
    }
    x = reshape(x, {frames * batch, config_.lstm_units});
    Var<S> d = dense_.forward(x);                   // [T*B, 2*width]
    d = reshape(d, {frames, batch, 2 * width});
    out = combine(slice(d, 2, 0, width), slice(d, 2, width, width));
  }
  out = reshape(out, {frames, batch, chan, freq});
  return permute(out, {1, 2, 3, 0});                // [B,C,F,T]
}

template <typename S>
ag::Var<S> Model<S>::core_offline(const ag::Var<S>& enc_out, bool train) {
  return core_apply(enc_out, train, nullptr, nullptr);
}

template <typename S>
ag::Var<S> Model<S>::mask_from_spec(const ag::Var<S>& y, bool train) {
  using namespace ag;
  const auto& shape = y->value.shape();
  const size_t f0 = config_.stft.bins() - 1;
  if (shape.size() != 3 || shape[1] != f0) {
    throw ShapeError("mask_from_spec: expected [B x " + std::to_string(f0) +
                     " x T], got " + shape_str(shape));
  }
  const size_t batch = shape[0], frames = shape[2];
  Var<S> x = reshape(y, {batch, 1, f0, frames});
  std::vector<Var<S>> skips;
  Var<S> h = encode_offline(x, train, &skips);
  Var<S> d = core_offline(h, train);
  const size_t depth = config_.depth();
  for (size_t j = 0; j < depth; ++j) {
    Var<S> in = j == 0 ? d : concat<S>({d, skips[depth - 1 - j]}, 1);
    d = decoder_[j].conv.forward(in);
    if (decoder_[j].has_post) {
      d = decoder_[j].bn.forward(d, train);
      d = decoder_[j].act.forward(d);
    }
  }
  return reshape(d, {batch, f0, frames});
}

template <typename S>
ag::Var<S> Model<S>::forward_wave(const ag::Var<S>& wave, bool train) {
  using namespace ag;
  const auto& shape = wave->value.shape();
  if (shape.size() != 2) {
    throw ShapeError("forward_wave: expected [B x L], got " +
                     shape_str(shape));
  }
  const size_t len = shape[1];
  const size_t padded = stft_.padded_len(len);
  Var<S> w = wave;
  if (padded > len) {
    ComplexTensor<S> pad({shape[0], padded - len});
    w = concat<S>({w, constant(std::move(pad))}, 1);
  }
  Var<S> spec = stft_.analyze(w);
  Var<S> y = StftTransform<S>::remove_dc(spec);
  Var<S> mask = mask_from_spec(y, train);
  Var<S> enhanced = apply_mask(y, mask, config_.variant);
  Var<S> full = StftTransform<S>::restore_dc(enhanced);
  return stft_.synthesize(full, len);
}

template <typename S>
typename Model<S>::EnhanceResult Model<S>::enhance(const std::vector<S>& wave) {
  if (wave.empty()) throw DataError("enhance: empty input");
  ag::NoGradGuard guard;
  const size_t len = wave.size();
  const size_t padded = stft_.padded_len(len);
  std::vector<S> w = wave;
  w.resize(padded, S(0));
  ag::Var<S> wv =
      ag::constant(ComplexTensor<S>::from_real({1, padded}, std::move(w)));
  ag::Var<S> spec = stft_.analyze(wv);
  ag::Var<S> y = StftTransform<S>::remove_dc(spec);
  ag::Var<S> mask = mask_from_spec(y, false);
  ag::Var<S> enhanced = apply_mask(y, mask, config_.variant);
  ag::Var<S> full = StftTransform<S>::restore_dc(enhanced);
  ag::Var<S> out = stft_.synthesize(full, len);
  EnhanceResult res;
  res.mask = mask->value.reshaped({mask->value.dim(1), mask->value.dim(2)});
  res.wave = out->value.re;
  return res;
}

template <typename S>
void Model<S>::prime_norm(const std::vector<S>& wave) {
  ag::NoGradGuard guard;
  ag::Var<S> wv =
      ag::constant(ComplexTensor<S>::from_real({1, wave.size()}, wave));
  (void)forward_wave(wv, true);
}

// --- streaming ---

template <typename S>
StreamState<S> Model<S>::open_stream() const {
  StreamState<S> st;
  st.model_id = id_;
  st.enc_prev.resize(config_.depth());
  st.dec_prev.resize(config_.depth());
  st.skips.resize(config_.depth());
  if (config_.variant == Variant::CL) {
    st.clstm_states.resize(config_.lstm_layers);
  } else {
    st.lstm_states.resize(config_.lstm_layers);
  }
  return st;
}

namespace {
template <typename S>
void check_stream(const StreamState<S>& st, uint64_t id) {
  if (st.model_id != id) {
    throw DataError("stream state belongs to a different model instance (id " +
                    std::to_string(st.model_id) + " vs " + std::to_string(id) +
                    ")");
  }
  if (st.flushed) throw DataError("stream already flushed");
}
}  // namespace

template <typename S>
ag::Var<S> Model<S>::core_step(const ag::Var<S>& enc_out, StreamState<S>& st) {
  return core_apply(enc_out, false,
                    config_.variant == Variant::CL ? nullptr : &st.lstm_states,
                    config_.variant == Variant::CL ? &st.clstm_states
                                                   : nullptr);
}

template <typename S>
std::optional<ComplexTensor<S>> Model<S>::decoder_cascade(
    StreamState<S>& st, ComplexTensor<S> input, size_t start_layer) {
  using namespace ag;
  NoGradGuard guard;
  ComplexTensor<S> cur = std::move(input);
  const size_t depth = config_.depth();
  for (size_t j = start_layer; j < depth; ++j) {
    if (st.dec_prev[j].numel() == 0) {
      st.dec_prev[j] = std::move(cur);
      return std::nullopt;
    }
    Var<S> window =
        concat<S>({constant(st.dec_prev[j]), constant(cur)}, 3);
    st.dec_prev[j] = std::move(cur);
    Var<S> out = decoder_[j].conv.forward_window(window);
    if (decoder_[j].has_post) {
      out = decoder_[j].bn.forward(out, false);
      out = decoder_[j].act.forward(out);
    }
    if (j + 1 == depth) return out->value;
    if (st.skips[j + 1].empty()) {
      throw DataError("stream state: skip buffer underrun");
    }
    ComplexTensor<S> skip = std::move(st.skips[j + 1].front());
    st.skips[j + 1].pop_front();
    cur = concat<S>({out, constant(std::move(skip))}, 1)->value;
  }
  return std::nullopt;
}

template <typename S>
std::optional<ComplexTensor<S>> Model<S>::push_spec_frame(
    StreamState<S>& st, const ComplexTensor<S>& col) {
  using namespace ag;
  check_stream(st, id_);
  const size_t f0 = config_.stft.bins() - 1;
  if (col.numel() != f0) {
    throw ShapeError("push_spec_frame: expected " + std::to_string(f0) +
                     " DC-removed bins, got " + shape_str(col.shape()));
  }
  NoGradGuard guard;
  st.noisy_frames.push_back(col);

  Var<S> h = constant(col.reshaped({1, 1, f0, 1}));
  const size_t depth = config_.depth();
  std::vector<ComplexTensor<S>> enc_outs(depth);
  for (size_t i = 0; i < depth; ++i) {
    ComplexTensor<S> prev =
        st.enc_prev[i].numel()
            ? st.enc_prev[i]
            : ComplexTensor<S>({1, enc_in_cc_[i], enc_f_in_[i], 1});
    st.enc_prev[i] = h->value;
    Var<S> window = concat<S>({constant(std::move(prev)), h}, 3);
    h = encoder_[i].conv.forward_window(window);
    h = encoder_[i].bn.forward(h, false);
    h = encoder_[i].act.forward(h);
    enc_outs[i] = h->value;
  }
  for (size_t j = 1; j < depth; ++j) {
    st.skips[j].push_back(enc_outs[depth - 1 - j]);
  }
  Var<S> d = core_step(h, st);
  st.frames_pushed++;

  auto mask = decoder_cascade(st, d->value, 0);
  if (!mask) return std::nullopt;
  ComplexTensor<S> y = std::move(st.noisy_frames.front());
  st.noisy_frames.pop_front();
  ComplexTensor<S> enhanced = apply_mask_raw(
      y, mask->reshaped({f0}), config_.variant);
  st.frames_emitted++;
  return enhanced;
}

template <typename S>
std::vector<ComplexTensor<S>> Model<S>::flush_spec_frames(StreamState<S>& st) {
  check_stream(st, id_);
  const size_t depth = config_.depth();
  const size_t f0 = config_.stft.bins() - 1;
  std::vector<ComplexTensor<S>> out;
  for (size_t r = 0; r < depth; ++r) {
    ComplexTensor<S> zero({1, dec_in_cc_[r], dec_f_in_[r], 1});
    auto mask = decoder_cascade(st, std::move(zero), r);
    if (mask && !st.noisy_frames.empty()) {
      ComplexTensor<S> y = std::move(st.noisy_frames.front());
      st.noisy_frames.pop_front();
      out.push_back(
          apply_mask_raw(y, mask->reshaped({f0}), config_.variant));
      st.frames_emitted++;
    }
  }
  return out;
}

namespace {
// Overlap-add one enhanced frame column and return the finalized hop chunk.
template <typename S>
std::vector<S> ola_emit(const StftTransform<S>& stft, StreamState<S>& st,
                        const ComplexTensor<S>& enhanced_col) {
  const size_t hop = stft.config().hop;
  const size_t win = stft.config().win_len;
  const size_t f0 = enhanced_col.numel();
  ComplexSpectrogram<S> one;
  one.config = stft.config();
  one.bins = ComplexTensor<S>({f0 + 1, 1});
  for (size_t k = 0; k < f0; ++k) {
    one.bins.re[k + 1] = enhanced_col.re[k];
    one.bins.im[k + 1] = enhanced_col.im[k];
  }
  std::vector<S> frame = stft.synthesize(one, win);
  const size_t pos = st.enhanced_frames * hop;
  if (st.ola.size() < pos + win) st.ola.resize(pos + win, S(0));
  for (size_t i = 0; i < win; ++i) st.ola[pos + i] += frame[i];
  st.enhanced_frames++;
  std::vector<S> chunk(st.ola.begin() + pos, st.ola.begin() + pos + hop);
  st.chunks_emitted++;
  return chunk;
}
}  // namespace

template <typename S>
std::optional<std::vector<S>> Model<S>::push_chunk(StreamState<S>& st,
                                                   const std::vector<S>& chunk) {
  check_stream(st, id_);
  const size_t hop = config_.stft.hop;
  const size_t win = config_.stft.win_len;
  if (chunk.size() != hop) {
    throw DataError("streaming chunk must be hop-sized (" +
                    std::to_string(hop) + " samples), got " +
                    std::to_string(chunk.size()));
  }
  st.pending.insert(st.pending.end(), chunk.begin(), chunk.end());
  st.samples_in += hop;

  std::optional<std::vector<S>> emitted;
  while (st.frames_made * hop + win <= st.samples_in) {
    const size_t start = st.frames_made * hop - st.pending_base;
    std::vector<S> window(st.pending.begin() + start,
                          st.pending.begin() + start + win);
    ComplexSpectrogram<S> spec = stft_.analyze(window);
    ComplexTensor<S> col({config_.stft.bins() - 1});
    for (size_t k = 0; k < col.numel(); ++k) {
      col.re[k] = spec.bins.re[k + 1];
      col.im[k] = spec.bins.im[k + 1];
    }
    st.frames_made++;
    // drop fully-consumed prefix
    const size_t keep_from = st.frames_made * hop;
    if (keep_from > st.pending_base) {
      st.pending.erase(st.pending.begin(),
                       st.pending.begin() + (keep_from - st.pending_base));
      st.pending_base = keep_from;
    }
    auto enhanced = push_spec_frame(st, col);
    if (enhanced) emitted = ola_emit(stft_, st, *enhanced);
  }
  return emitted;
}

template <typename S>
std::vector<S> Model<S>::flush_chunks(StreamState<S>& st) {
  check_stream(st, id_);
  const size_t hop = config_.stft.hop;
  const size_t win = config_.stft.win_len;
  if (st.samples_in == 0) {
    // Idle pipeline drain: the look-ahead queue worth of silence.
    st.flushed = true;
    return std::vector<S>(config_.lookahead_frames * hop, S(0));
  }
  std::vector<S> out;
  const size_t total_frames = stft_.frame_count(stft_.padded_len(st.samples_in));
  while (st.frames_made < total_frames) {
    const size_t start = st.frames_made * hop - st.pending_base;
    std::vector<S> window(win, S(0));
    for (size_t i = 0; i < win && start + i < st.pending.size(); ++i) {
      window[i] = st.pending[start + i];
    }
    ComplexSpectrogram<S> spec = stft_.analyze(window);
    ComplexTensor<S> col({config_.stft.bins() - 1});
    for (size_t k = 0; k < col.numel(); ++k) {
      col.re[k] = spec.bins.re[k + 1];
      col.im[k] = spec.bins.im[k + 1];
    }
    st.frames_made++;
    auto enhanced = push_spec_frame(st, col);
    if (enhanced) {
      std::vector<S> chunk = ola_emit(stft_, st, *enhanced);
      out.insert(out.end(), chunk.begin(), chunk.end());
    }
  }
  std::vector<ComplexTensor<S>> tail_frames = flush_spec_frames(st);
  for (const auto& enhanced : tail_frames) {
    std::vector<S> chunk = ola_emit(stft_, st, enhanced);
    out.insert(out.end(), chunk.begin(), chunk.end());
  }
  // remaining overlap-add tail up to the exact input length
  const size_t covered = st.chunks_emitted * hop;
  if (st.samples_in > covered) {
    const size_t tail = st.samples_in - covered;
    std::vector<S> rest(tail, S(0));
    for (size_t i = 0; i < tail && covered + i < st.ola.size(); ++i) {
      rest[i] = st.ola[covered + i];
    }
    out.insert(out.end(), rest.begin(), rest.end());
  }
  st.flushed = true;
  return out;
}

#define DCCRN_INSTANTIATE_MODEL(S)                                           \
  template class Model<S>;                                                   \
  template struct StreamState<S>;                                            \
  template ag::Var<S> apply_mask<S>(const ag::Var<S>&, const ag::Var<S>&,    \
                                    Variant);                                \
  template ag::Var<S> apply_mask_polar<S>(const ag::Var<S>&,                 \
                                          const ag::Var<S>&, bool);          \
  template ComplexTensor<S> apply_mask_raw<S>(const ComplexTensor<S>&,       \
                                              const ComplexTensor<S>&,       \
                                              Variant);

DCCRN_INSTANTIATE_MODEL(float)
DCCRN_INSTANTIATE_MODEL(double)

}  // namespace dccrn
