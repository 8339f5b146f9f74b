#include "mgen/chroma.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace mgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

double midi_to_hz(double pitch) {
  return 440.0 * std::pow(2.0, (pitch - 69.0) / 12.0);
}

void add_note(std::vector<double>& buf, double sample_rate, double t0,
              double t1, double freq) {
  const long a = static_cast<long>(t0 * sample_rate);
  const long b = std::min(static_cast<long>(t1 * sample_rate),
                          static_cast<long>(buf.size()));
  const double fade = 0.010 * sample_rate;  // 10 ms
  const double len = static_cast<double>(b - a);
  const double ramp = std::min(fade, len / 2.0);
  const double w = 2.0 * kPi * freq / sample_rate;
  for (long s = a; s < b; ++s) {
    const double k = static_cast<double>(s - a);
    double env = 1.0;
    if (ramp > 0.0) {
      if (k < ramp) env = k / ramp;
      const double tail = len - 1.0 - k;
      if (tail < ramp) env = std::min(env, std::max(0.0, tail / ramp));
    }
    buf[s] += env * std::sin(w * k);
  }
}

// In-place iterative radix-2 FFT.
void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace

std::vector<double> synthesize(const SymbolicScore& score, double sample_rate,
                               bool normalize) {
  validate_score(score);
  if (score.melody.empty() && score.chords.empty())
    fail("synthesize: empty score");

  const double sec_per_tick = 60.0 / (score.bpm * score.ticks_per_beat);
  long end_ticks = 0;
  for (const auto& n : score.melody)
    end_ticks = std::max(end_ticks, n.onset_ticks + n.duration_ticks);
  for (const auto& c : score.chords)
    end_ticks = std::max(end_ticks, c.onset_ticks + c.duration_ticks);

  const std::size_t total =
      static_cast<std::size_t>(std::ceil(end_ticks * sec_per_tick * sample_rate));
  std::vector<double> melody_buf(total, 0.0), chord_buf(total, 0.0);

  for (const auto& n : score.melody)
    add_note(melody_buf, sample_rate, n.onset_ticks * sec_per_tick,
             (n.onset_ticks + n.duration_ticks) * sec_per_tick,
             midi_to_hz(n.pitch));
  for (const auto& c : score.chords)
    for (int pc : c.pitch_classes)
      add_note(chord_buf, sample_rate, c.onset_ticks * sec_per_tick,
               (c.onset_ticks + c.duration_ticks) * sec_per_tick,
               midi_to_hz(48 + pc));

  std::vector<double> mix(total);
  for (std::size_t i = 0; i < total; ++i) mix[i] = melody_buf[i] + chord_buf[i];

  if (normalize) {
    double peak = 0.0;
    for (double v : mix) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
      const double g = 0.9 / peak;
      for (double& v : mix) v *= g;
    }
  }
  return mix;
}

Tensor stft_power(const std::vector<double>& samples, int window, int hop) {
  if (window < 2 || (window & (window - 1)) != 0)
    fail("stft: window must be a power of two");
  if (hop < 1) fail("stft: hop must be positive");
  if (samples.size() < static_cast<std::size_t>(window))
    fail("stft: input shorter than one window");

  const std::size_t n_frames = 1 + (samples.size() - window) / hop;
  const std::size_t n_bins = window / 2 + 1;
  Tensor spec({n_frames, n_bins});

  std::vector<double> hann(window);
  for (int i = 0; i < window; ++i)
    hann[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (window - 1)));

  std::vector<std::complex<double>> buf(window);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const double* src = samples.data() + f * hop;
    for (int i = 0; i < window; ++i) buf[i] = {src[i] * hann[i], 0.0};
    fft(buf);
    for (std::size_t k = 0; k < n_bins; ++k) spec(f, k) = std::norm(buf[k]);
  }
  return spec;
}

ChromaSequence fold_chroma(const Tensor& spectrogram, double sample_rate,
                           int window, int hop) {
  const std::size_t n_frames = spectrogram.dim(0);
  const std::size_t n_bins = spectrogram.dim(1);
  ChromaSequence out;
  out.frames = Tensor({n_frames, 12});
  out.frame_rate = sample_rate / hop;

  std::vector<int> bin_pc(n_bins, -1);
  for (std::size_t k = 0; k < n_bins; ++k) {
    const double f = k * sample_rate / window;
    if (f < 27.5) continue;
    const int pitch =
        static_cast<int>(std::lround(12.0 * std::log2(f / 440.0) + 69.0));
    bin_pc[k] = ((pitch % 12) + 12) % 12;
  }
  for (std::size_t t = 0; t < n_frames; ++t)
    for (std::size_t k = 0; k < n_bins; ++k)
      if (bin_pc[k] >= 0) out.frames(t, bin_pc[k]) += spectrogram(t, k);
  return out;
}

ChromaSequence stft_chroma(const std::vector<double>& samples,
                           double sample_rate, int window, int hop) {
  return fold_chroma(stft_power(samples, window, hop), sample_rate, window,
                     hop);
}

namespace {
void unit_normalize(std::vector<std::vector<double>>& rows) {
  for (auto& r : rows) {
    double norm = 0.0;
    for (double v : r) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : r) v /= norm;
  }
}
}  // namespace

std::vector<std::vector<double>> beat_chroma_audio(const SymbolicScore& score,
                                                   double sample_rate,
                                                   int window, int hop) {
  const std::vector<double> samples = synthesize(score, sample_rate);
  const ChromaSequence chroma = stft_chroma(samples, sample_rate, window, hop);
  const double sec_per_beat = 60.0 / score.bpm;

  std::vector<std::vector<double>> beats;
  std::vector<int> counts;
  for (std::size_t f = 0; f < chroma.frames.dim(0); ++f) {
    const double t = (f * static_cast<double>(hop) + window / 2.0) / sample_rate;
    const std::size_t beat = static_cast<std::size_t>(t / sec_per_beat);
    while (beats.size() <= beat) {
      beats.emplace_back(12, 0.0);
      counts.push_back(0);
    }
    for (int pc = 0; pc < 12; ++pc) beats[beat][pc] += chroma.frames(f, pc);
    ++counts[beat];
  }
  for (std::size_t b = 0; b < beats.size(); ++b)
    if (counts[b] > 0)
      for (double& v : beats[b]) v /= counts[b];
  unit_normalize(beats);
  return beats;
}

std::vector<std::vector<double>> beat_chroma_symbolic(
    const SymbolicScore& score) {
  validate_score(score);
  if (score.melody.empty() && score.chords.empty())
    fail("beat_chroma_symbolic: empty score");
  const double tpb = score.ticks_per_beat;

  long end_ticks = 0;
  for (const auto& n : score.melody)
    end_ticks = std::max(end_ticks, n.onset_ticks + n.duration_ticks);
  for (const auto& c : score.chords)
    end_ticks = std::max(end_ticks, c.onset_ticks + c.duration_ticks);
  const std::size_t n_beats =
      static_cast<std::size_t>(std::ceil(end_ticks / tpb));

  std::vector<std::vector<double>> beats(n_beats, std::vector<double>(12, 0.0));
  auto accumulate = [&](long onset, long dur, int pc, double gain) {
    const double a = onset / tpb, b = (onset + dur) / tpb;
    for (std::size_t beat = static_cast<std::size_t>(a); beat < n_beats;
         ++beat) {
      const double lo = std::max(a, static_cast<double>(beat));
      const double hi = std::min(b, static_cast<double>(beat + 1));
      if (hi <= lo) break;
      beats[beat][pc] += gain * (hi - lo);
    }
  };
  for (const auto& n : score.melody)
    accumulate(n.onset_ticks, n.duration_ticks, n.pitch % 12, 1.0);
  for (const auto& c : score.chords)
    for (int pc : c.pitch_classes)
      accumulate(c.onset_ticks, c.duration_ticks, pc, 1.0);

  unit_normalize(beats);
  return beats;
}

}  // namespace mgen
