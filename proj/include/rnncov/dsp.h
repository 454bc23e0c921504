// Copyright 2026 The rnncov Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Signal-processing building blocks used by the audio transformations and
// the feature front end.

#ifndef RNNCOV_DSP_H_
#define RNNCOV_DSP_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace rnncov::dsp {

// Real-to-complex FFT of a fixed size backed by FFTW plans. FFTW planning is
// not thread-safe, so instances must be created and used from one thread.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  // n/2 + 1 bins. `frame` must have exactly size() samples.
  std::vector<std::complex<double>> Forward(std::span<const double> frame);
  // Unnormalized inverse: Inverse(Forward(x)) == n * x.
  std::vector<double> Inverse(std::span<const std::complex<double>> bins);

 private:
  struct Plans;
  std::size_t n_;
  std::unique_ptr<Plans> plans_;
};

std::vector<double> HannWindow(std::size_t n);   // periodic
std::vector<double> HammingWindow(std::size_t n);  // symmetric

// Second-order section in direct form I with a0 normalized to 1.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;

  // Butterworth (Q = 1/sqrt(2)) low/high-pass at `cutoff` Hz.
  static Biquad LowPass(double cutoff, double sample_rate);
  static Biquad HighPass(double cutoff, double sample_rate);

  std::vector<double> Process(std::span<const double> x) const;
};

// Linear-interpolation resampling of x onto `out_len` evenly spaced points
// spanning the same duration.
std::vector<double> ResampleLinear(std::span<const double> x, std::size_t out_len);

// Phase-vocoder time stretch; output length is round(len * stretch).
std::vector<double> TimeStretch(std::span<const double> x, double stretch,
                                std::size_t fft_size = 1024, std::size_t hop = 256);

// Pitch shift by `semitones` keeping the length: stretch by 2^(s/12), then
// resample back to the input length.
std::vector<double> PitchShift(std::span<const double> x, double semitones);

}  // namespace rnncov::dsp

#endif  // RNNCOV_DSP_H_
