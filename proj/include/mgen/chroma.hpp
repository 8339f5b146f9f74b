#pragma once

#include <vector>

#include "mgen/score.hpp"
#include "mgen/tensor.hpp"

namespace mgen {

struct ChromaSequence {
  Tensor frames;            // (N, 12), nonnegative energies
  double frame_rate = 0.0;  // Hz
};

// Additive sine rendering: each note contributes sin(2*pi*f*t) at
// f = 440 * 2^((pitch-69)/12) with a 10 ms linear fade in/out; chord pitch
// classes sound at octave 3 (MIDI 48+pc). Melody and chord tracks mix at
// equal gain; the result is peak-normalized to 0.9 unless disabled.
std::vector<double> synthesize(const SymbolicScore& score,
                               double sample_rate = 44100.0,
                               bool normalize = true);

// Hann-windowed magnitude-squared spectrogram, (N, window/2+1) with
// N = 1 + floor((len-window)/hop). Window must be a power of two.
Tensor stft_power(const std::vector<double>& samples, int window = 4096,
                  int hop = 1024);

// Sums each bin with center frequency >= 27.5 Hz into pitch class
// round(12*log2(f/440) + 69) mod 12. Energy is conserved over the folded
// bins.
ChromaSequence fold_chroma(const Tensor& spectrogram, double sample_rate,
                           int window, int hop);

ChromaSequence stft_chroma(const std::vector<double>& samples,
                           double sample_rate = 44100.0, int window = 4096,
                           int hop = 1024);

// Audio-path beat features: STFT chroma frames averaged per beat, then
// unit-normalized.
std::vector<std::vector<double>> beat_chroma_audio(const SymbolicScore& score,
                                                   double sample_rate = 44100.0,
                                                   int window = 4096,
                                                   int hop = 1024);

// Symbolic fast path: per-beat pitch-class occupancy straight from note
// durations (melody and chords), unit-normalized. Deterministic, no DSP.
std::vector<std::vector<double>> beat_chroma_symbolic(
    const SymbolicScore& score);

}  // namespace mgen
