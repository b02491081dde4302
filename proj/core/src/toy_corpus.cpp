// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/toy_corpus.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "speechchain/common.hpp"
#include "speechchain/dsp.hpp"
#include "speechchain/rng.hpp"
#include "speechchain/text.hpp"
#include "speechchain/wav.hpp"

namespace fs = std::filesystem;

namespace speechchain {

namespace {

constexpr int kMel = DspParams::kMelDim;
constexpr double kSilentLog = -30.0;  // below any active band

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Language text model: word-start distribution plus bigram transitions.
// The high-resource language covers all 26 letters broadly; low-resource
// languages concentrate on a 13-letter pool of their own, so their character
// statistics diverge from the high-resource prior.
struct LanguageModel {
  std::vector<double> start_weights;             // 26
  std::vector<std::vector<double>> transition;   // 26 x 26 weights

  static LanguageModel build(std::uint64_t seed, bool high_resource) {
    Rng rng(seed);
    LanguageModel lm;
    std::vector<int> pool(26);
    for (int i = 0; i < 26; ++i) pool[static_cast<size_t>(i)] = i;
    if (!high_resource) {
      rng.shuffle(pool);
      pool.resize(13);
    }

    lm.start_weights.assign(26, 0.0);
    for (std::size_t rank = 0; rank < pool.size(); ++rank) {
      double zipf = 1.0 / (1.0 + 0.35 * static_cast<double>(rank));
      lm.start_weights[static_cast<size_t>(pool[rank])] = zipf * rng.uniform_real(0.6, 1.4);
    }

    lm.transition.assign(26, std::vector<double>(26, 0.0));
    const int fanout = high_resource ? 10 : 5;
    for (int from = 0; from < 26; ++from) {
      auto& row = lm.transition[static_cast<size_t>(from)];
      for (int pick = 0; pick < fanout; ++pick) {
        int to = pool[static_cast<size_t>(rng.uniform_u64(pool.size()))];
        row[static_cast<size_t>(to)] += rng.uniform_real(0.3, 1.0);
      }
      // A small escape mass keeps every letter reachable from everywhere.
      int any = static_cast<int>(rng.uniform_u64(26));
      row[static_cast<size_t>(any)] += 0.08;
    }
    return lm;
  }

  int sample(const std::vector<double>& weights, Rng& rng) const {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = rng.uniform_real() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      r -= weights[i];
      if (r <= 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  std::string word(Rng& rng) const {
    int len = 2 + static_cast<int>(rng.uniform_u64(5));  // 2..6 letters
    std::string w;
    int prev = sample(start_weights, rng);
    w += static_cast<char>('a' + prev);
    for (int i = 1; i < len; ++i) {
      int next = sample(transition[static_cast<size_t>(prev)], rng);
      w += static_cast<char>('a' + next);
      prev = next;
    }
    // Occasional punctuation inside a word, for symbol coverage.
    if (w.size() >= 4 && rng.uniform_real() < 0.05) {
      std::size_t pos = 1 + rng.uniform_u64(w.size() - 2);
      w.insert(pos, 1, rng.uniform_real() < 0.5 ? '\'' : '-');
    }
    return w;
  }
};

LanguageModel language_model_for(const ToyCorpusConfig& config, int language_index) {
  return LanguageModel::build(mix(config.seed, 0x11aa0000u + static_cast<std::uint64_t>(language_index)),
                              language_index == 0);
}

}  // namespace

ToyCorpusConfig ToyCorpusConfig::defaults() {
  ToyCorpusConfig cfg;
  cfg.languages = {{"toy-hi", 4, 50}, {"toy-lo", 4, 50}};
  return cfg;
}

ToyCorpusConfig ToyCorpusConfig::from_kv(const KVConfig& kv) {
  ToyCorpusConfig cfg = defaults();
  std::vector<std::string> names = kv.get_list("languages", {"toy-hi", "toy-lo"});
  SC_CHECK(!names.empty(), "toy corpus config: languages list is empty");

  auto per_language = [&](const std::string& key, long fallback) {
    std::vector<long> out(names.size(), fallback);
    if (!kv.has(key)) return out;
    std::vector<long> vals = kv.get_int_list(key);
    if (vals.size() == 1) {
      std::fill(out.begin(), out.end(), vals[0]);
    } else {
      SC_CHECK(vals.size() == names.size(),
               "toy corpus config: '%s' needs 1 or %zu entries, got %zu", key.c_str(),
               names.size(), vals.size());
      out = vals;
    }
    return out;
  };
  std::vector<long> speakers = per_language("speakers_per_language", 4);
  std::vector<long> utts = per_language("utts_per_speaker", 50);

  cfg.languages.clear();
  for (std::size_t i = 0; i < names.size(); ++i)
    cfg.languages.push_back({names[i], static_cast<int>(speakers[i]), static_cast<int>(utts[i])});
  cfg.min_words = static_cast<int>(kv.get_int("min_len", 1));
  cfg.max_words = static_cast<int>(kv.get_int("max_len", 3));
  cfg.seed = static_cast<std::uint64_t>(kv.get_int("seed", 1234));
  cfg.validate();
  return cfg;
}

void ToyCorpusConfig::validate() const {
  SC_CHECK(languages.size() >= 2, "toy corpus config: need at least 2 languages, got %zu",
           languages.size());
  for (const auto& lang : languages) {
    SC_CHECK(!lang.name.empty(), "toy corpus config: empty language name");
    SC_CHECK(lang.speakers >= 1, "toy corpus config: language %s has %d speakers",
             lang.name.c_str(), lang.speakers);
    SC_CHECK(lang.utts_per_speaker >= 1, "toy corpus config: language %s has %d utts/speaker",
             lang.name.c_str(), lang.utts_per_speaker);
  }
  SC_CHECK(min_words >= 1 && max_words >= min_words,
           "toy corpus config: bad sentence length range [%d,%d]", min_words, max_words);
}

ToyVocoder::ToyVocoder(std::uint64_t bank_seed) {
  Rng rng(bank_seed);
  templates_.assign(CharInventory::kSize, Eigen::VectorXd::Constant(kMel, kSilentLog));

  // Templates combine Gaussian bumps over the silent floor; peak_log is the
  // bump's log-amplitude at its center.
  auto bump = [](Eigen::VectorXd& t, double center, double width, double peak_log) {
    for (int m = 0; m < kMel; ++m) {
      double d = (m - center) / width;
      t[m] = std::max(t[m], kSilentLog + (peak_log - kSilentLog) * std::exp(-0.5 * d * d));
    }
  };

  // 26 letters: three formant bumps; golden-ratio spacing keeps letters
  // spectrally distinct, jitter decorrelates the bank across seeds.
  const double phi = 0.6180339887498949;
  for (int k = 0; k < 26; ++k) {
    Eigen::VectorXd t = Eigen::VectorXd::Constant(kMel, kSilentLog);
    double f1 = 6.0 + 16.0 * std::fmod(k * phi, 1.0) + rng.uniform_real(-1.0, 1.0);
    double f2 = 28.0 + 20.0 * std::fmod(k * phi + 0.33, 1.0) + rng.uniform_real(-1.0, 1.0);
    double f3 = 52.0 + 20.0 * std::fmod(k * phi + 0.67, 1.0) + rng.uniform_real(-1.0, 1.0);
    bump(t, f1, rng.uniform_real(1.5, 3.0), rng.uniform_real(-5.0, -3.0));
    bump(t, f2, rng.uniform_real(1.5, 3.0), rng.uniform_real(-6.0, -3.5));
    bump(t, f3, rng.uniform_real(1.5, 3.0), rng.uniform_real(-7.0, -4.0));
    templates_[static_cast<size_t>(4 + k)] = t;
  }

  // Punctuation: two weaker bumps each.
  for (int id : {30, 31, 32}) {
    Eigen::VectorXd t = Eigen::VectorXd::Constant(kMel, kSilentLog);
    double c1 = rng.uniform_real(10.0, 35.0);
    double c2 = rng.uniform_real(45.0, 70.0);
    bump(t, c1, rng.uniform_real(1.5, 2.5), rng.uniform_real(-10.0, -8.0));
    bump(t, c2, rng.uniform_real(1.5, 2.5), rng.uniform_real(-11.0, -9.0));
    templates_[static_cast<size_t>(id)] = t;
  }
  // <spc> and tags stay silent.
}

const Eigen::VectorXd& ToyVocoder::symbol_template(int id) const {
  SC_CHECK(id >= 0 && id < CharInventory::kSize, "symbol_template: id %d out of range", id);
  return templates_[static_cast<size_t>(id)];
}

Eigen::MatrixXd ToyVocoder::frame_amplitudes(const std::string& transcript,
                                             const ToySpeakerParams& speaker) const {
  CharSequence seq = encode(normalize_transcript(transcript), /*add_boundaries=*/false);
  SC_CHECK(!seq.ids.empty(), "toy vocoder: empty transcript");

  // Warp a symbol template: shift along the mel axis, then tilt + gain.
  auto warped = [&](int id) {
    const Eigen::VectorXd& t = templates_[static_cast<size_t>(id)];
    Eigen::VectorXd out(kMel);
    for (int m = 0; m < kMel; ++m) {
      double src = m - speaker.shift_bins;
      double v;
      if (src <= 0.0 || src >= kMel - 1) {
        v = kSilentLog;
      } else {
        int lo = static_cast<int>(std::floor(src));
        double frac = src - lo;
        v = (1.0 - frac) * t[lo] + frac * t[lo + 1];
      }
      v += speaker.tilt * (m - kMel / 2.0) / (kMel / 2.0) + speaker.brightness;
      out[m] = v;
    }
    return out;
  };

  const int n = static_cast<int>(seq.ids.size());
  const int frames_per_char = kFramesPerChar;
  const int total = kEdgeSilenceFrames * 2 + n * frames_per_char;

  // Per-character warped template, in the linear amplitude domain.
  std::vector<Eigen::VectorXd> char_amp(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c)
    char_amp[static_cast<size_t>(c)] = warped(seq.ids[static_cast<size_t>(c)]).array().exp();

  Eigen::MatrixXd amps = Eigen::MatrixXd::Zero(total, kMel);
  const double silent_amp = std::exp(kSilentLog);
  amps.array() += silent_amp;

  for (int c = 0; c < n; ++c) {
    for (int f = 0; f < frames_per_char; ++f) {
      const int row = kEdgeSilenceFrames + c * frames_per_char + f;
      // Within-character envelope; env_rise is the speaker's tempo warp.
      double env = std::min(1.0, static_cast<double>(f + 1) / speaker.env_rise);
      if (f == frames_per_char - 1) env *= 0.7;
      Eigen::VectorXd a = env * char_amp[static_cast<size_t>(c)];
      // 2-frame linear cross-fade into the next character.
      if (c + 1 < n && f >= frames_per_char - kCrossFadeFrames) {
        double alpha = (f - (frames_per_char - kCrossFadeFrames) + 1.0) / (kCrossFadeFrames + 1.0);
        a = (1.0 - alpha) * a + alpha * char_amp[static_cast<size_t>(c + 1)];
      }
      amps.row(row) = a.transpose();
    }
  }
  return amps;
}

std::vector<double> ToyVocoder::render(const std::string& transcript,
                                       const ToySpeakerParams& speaker) const {
  Eigen::MatrixXd amps = frame_amplitudes(transcript, speaker);
  const int frames = static_cast<int>(amps.rows());
  const int hop = DspParams::kFrameShift;
  // Tail padding so the analysis frame count equals the vocoder frame count.
  const std::size_t n_samples = static_cast<std::size_t>(frames) * hop +
                                static_cast<std::size_t>(DspParams::kFrameLength - hop);
  std::vector<double> out(n_samples, 0.0);

  // One sinusoid per mel band at its center frequency, phase-continuous
  // across frames via complex rotation.
  std::vector<std::complex<double>> phase(kMel), step(kMel);
  for (int m = 0; m < kMel; ++m) {
    double omega = 2.0 * std::numbers::pi * mel_center_hz(m) / DspParams::kSampleRate;
    step[static_cast<size_t>(m)] = std::polar(1.0, omega);
    // Deterministic initial phase spreads band onsets apart.
    phase[static_cast<size_t>(m)] = std::polar(1.0, 2.0 * std::numbers::pi * m * 0.37);
  }

  constexpr double kActiveAmp = 2e-5;  // below 16-bit resolution: skip
  for (int f = 0; f < frames; ++f) {
    const std::size_t off = static_cast<std::size_t>(f) * hop;
    for (int m = 0; m < kMel; ++m) {
      const double amp = amps(f, m);
      std::complex<double>& ph = phase[static_cast<size_t>(m)];
      const std::complex<double> st = step[static_cast<size_t>(m)];
      if (amp < kActiveAmp) {
        // Keep the oscillator phase advancing through inactive frames.
        double total = std::arg(st) * hop;
        ph *= std::polar(1.0, total);
        continue;
      }
      std::complex<double> z = ph;
      for (int n_s = 0; n_s < hop; ++n_s) {
        out[off + static_cast<size_t>(n_s)] += amp * z.imag();
        z *= st;
      }
      ph = z / std::abs(z);  // renormalize against drift
    }
  }
  return out;
}

ToySpeakerParams toy_speaker_params(const ToyCorpusConfig& config, int language_index,
                                    int speaker_index) {
  Rng rng(mix(config.seed, 0x22bb0000u + static_cast<std::uint64_t>(language_index) * 1000u +
                               static_cast<std::uint64_t>(speaker_index)));
  ToySpeakerParams p;
  if (language_index == 0) {
    p.shift_bins = rng.uniform_real(-2.0, 2.0);
    p.tilt = rng.uniform_real(-1.2, 1.2);
  } else {
    // Low-resource speakers live outside the high-resource warp ranges.
    double mag = rng.uniform_real(3.5, 6.5);
    p.shift_bins = rng.uniform_real() < 0.5 ? -mag : mag;
    double tilt_mag = rng.uniform_real(1.6, 2.8);
    p.tilt = rng.uniform_real() < 0.5 ? -tilt_mag : tilt_mag;
  }
  p.brightness = rng.uniform_real(-0.4, 0.4);
  p.env_rise = 1 + static_cast<int>(rng.uniform_u64(3));
  return p;
}

std::string toy_sentence(const ToyCorpusConfig& config, int language_index, std::uint64_t stream) {
  LanguageModel lm = language_model_for(config, language_index);
  Rng rng(mix(config.seed, 0x33cc0000u + mix(static_cast<std::uint64_t>(language_index), stream)));
  int n_words =
      config.min_words + static_cast<int>(rng.uniform_u64(
                             static_cast<std::uint64_t>(config.max_words - config.min_words + 1)));
  std::vector<std::string> words;
  for (int w = 0; w < n_words; ++w) words.push_back(lm.word(rng));
  std::string sentence = join(words, " ");
  if (rng.uniform_real() < 0.3) sentence += '.';
  return sentence;
}

CorpusManifest generate_toy_corpus(const ToyCorpusConfig& config, const std::string& out_dir) {
  config.validate();
  fs::create_directories(fs::path(out_dir) / "wav");

  ToyVocoder vocoder(mix(config.seed, 0x44dd0000u));
  CorpusManifest manifest;
  manifest.base_dir = out_dir;

  for (std::size_t li = 0; li < config.languages.size(); ++li) {
    const ToyLanguageSpec& lang = config.languages[li];
    for (int si = 0; si < lang.speakers; ++si) {
      ToySpeakerParams spk = toy_speaker_params(config, static_cast<int>(li), si);
      std::string speaker_id = strprintf("%s_s%02d", lang.name.c_str(), si);
      for (int ui = 0; ui < lang.utts_per_speaker; ++ui) {
        std::uint64_t stream =
            static_cast<std::uint64_t>(si) * 100000u + static_cast<std::uint64_t>(ui);
        std::string sentence = toy_sentence(config, static_cast<int>(li), stream);

        UtteranceRecord rec;
        rec.utt_id = strprintf("%s_u%04d", speaker_id.c_str(), ui);
        rec.speaker_id = speaker_id;
        rec.language = lang.name;
        rec.transcript = normalize_transcript(sentence);
        rec.audio_path = "wav/" + rec.utt_id + ".wav";
        rec.sample_rate = DspParams::kSampleRate;

        std::vector<double> samples = vocoder.render(*rec.transcript, spk);
        write_wav((fs::path(out_dir) / rec.audio_path).string(), samples, DspParams::kSampleRate);
        manifest.records.push_back(std::move(rec));
      }
    }
  }
  save_manifest((fs::path(out_dir) / "manifest.tsv").string(), manifest);
  CharInventory::instance().dump((fs::path(out_dir) / "inventory.txt").string());
  return manifest;
}

}  // namespace speechchain
