// SPDX-License-Identifier: Apache-2.0
//
// Cosine-modulated analysis filter bank and critically decimated subband
// decomposition. Only the analysis side is implemented; the adaptive
// filter never reconstructs the fullband signal.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fonspn {

struct FilterBank {
  int num_bands = 0;   // N
  int length = 0;      // D, taps per analysis filter
  int decimation = 0;  // critical decimation factor, equal to num_bands
  std::vector<std::vector<double>> coeffs;  // num_bands rows of `length` taps

  void validate() const;

  // Single pass-through band: reduces the subband machinery to a plain
  // fullband adaptive filter. Handy in tests and as a degenerate case.
  static FilterBank identity(int length = 1);
};

// Magnitude of the frequency response of an FIR filter at `omega` (rad).
double amplitude_response(std::span<const double> fir, double omega);

// Designs an N-band pseudo-QMF bank of filters with `length` taps each from
// a Hamming-windowed-sinc lowpass prototype. The prototype cutoff is placed
// so the band edge pi/(2N) sits at the half-power point, which keeps the
// bank power-complementary; the result is normalized to unit passband gain
// in band 1. `length` must be a multiple of 2 * num_bands.
FilterBank design_bank(int num_bands, int length);

// One decimated time step: per-band sliding regressors (newest entry
// first) plus the per-band filtered desired sample. frame_index k
// corresponds to fullband time k * decimation.
struct SubbandFrame {
  std::vector<std::vector<double>> band_inputs;
  std::vector<double> band_desired;
  long frame_index = -1;
};

// Streams SubbandFrames over a (input, desired) signal pair. Carries the
// per-band delay-line state internally; use one stream per thread.
class SubbandStream {
 public:
  SubbandStream(const FilterBank& bank, std::span<const double> input,
                std::span<const double> desired, int taps);

  // Fills `frame`, reusing its storage. Returns false once the input is
  // exhausted; that is the normal end-of-stream signal, not an error.
  bool next(SubbandFrame& frame);

  // Number of frames this stream will produce in total.
  long total_frames() const;

 private:
  const FilterBank* bank_;
  std::span<const double> input_;
  std::span<const double> desired_;
  int taps_;
  long consumed_ = 0;  // fullband samples already pushed through the bank
  long frame_ = 0;
  std::vector<std::vector<double>> regressors_;  // per band, newest first
};

}  // namespace fonspn
