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


#include "rnncov/dsp.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "rnncov/error.h"

namespace rnncov::dsp {

struct RealFft::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  ~Plans() {
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (inverse != nullptr) fftw_destroy_plan(inverse);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n < 2) throw ConfigError("FFT size must be >= 2");
  plans_->real = fftw_alloc_real(n);
  plans_->spec = fftw_alloc_complex(n / 2 + 1);
  const int size = static_cast<int>(n);
  plans_->forward = fftw_plan_dft_r2c_1d(size, plans_->real, plans_->spec, FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r_1d(size, plans_->spec, plans_->real, FFTW_ESTIMATE);
  if (plans_->forward == nullptr || plans_->inverse == nullptr) {
    throw Error("FFTW planning failed");
  }
}

RealFft::~RealFft() = default;

std::vector<std::complex<double>> RealFft::Forward(std::span<const double> frame) {
  if (frame.size() != n_) throw ValidationError("FFT frame has the wrong length");
  std::copy(frame.begin(), frame.end(), plans_->real);
  fftw_execute(plans_->forward);
  std::vector<std::complex<double>> out(n_ / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = {plans_->spec[k][0], plans_->spec[k][1]};
  }
  return out;
}

std::vector<double> RealFft::Inverse(std::span<const std::complex<double>> bins) {
  if (bins.size() != n_ / 2 + 1) throw ValidationError("FFT bin count is wrong");
  for (std::size_t k = 0; k < bins.size(); ++k) {
    plans_->spec[k][0] = bins[k].real();
    plans_->spec[k][1] = bins[k].imag();
  }
  // c2r overwrites its input, which is ours to clobber.
  fftw_execute(plans_->inverse);
  return std::vector<double>(plans_->real, plans_->real + n_);
}

std::vector<double> HannWindow(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

std::vector<double> HammingWindow(std::size_t n) {
  std::vector<double> w(n);
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
  }
  return w;
}

namespace {

constexpr double kButterworthQ = 1.0 / std::numbers::sqrt2;

Biquad Normalize(double b0, double b1, double b2, double a0, double a1, double a2) {
  return {b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0};
}

}  // namespace

Biquad Biquad::LowPass(double cutoff, double sample_rate) {
  if (!(cutoff > 0 && cutoff < sample_rate / 2)) {
    throw ConfigError("cutoff must lie strictly between 0 and Nyquist");
  }
  const double w0 = 2.0 * std::numbers::pi * cutoff / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * kButterworthQ);
  const double c = std::cos(w0);
  return Normalize((1 - c) / 2, 1 - c, (1 - c) / 2, 1 + alpha, -2 * c, 1 - alpha);
}

Biquad Biquad::HighPass(double cutoff, double sample_rate) {
  if (!(cutoff > 0 && cutoff < sample_rate / 2)) {
    throw ConfigError("cutoff must lie strictly between 0 and Nyquist");
  }
  const double w0 = 2.0 * std::numbers::pi * cutoff / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * kButterworthQ);
  const double c = std::cos(w0);
  return Normalize((1 + c) / 2, -(1 + c), (1 + c) / 2, 1 + alpha, -2 * c, 1 - alpha);
}

std::vector<double> Biquad::Process(std::span<const double> x) const {
  std::vector<double> y(x.size());
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double out = b0 * x[i] + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x[i];
    y2 = y1;
    y1 = out;
    y[i] = out;
  }
  return y;
}

std::vector<double> ResampleLinear(std::span<const double> x, std::size_t out_len) {
  std::vector<double> y(out_len);
  if (x.empty() || out_len == 0) return y;
  if (out_len == 1 || x.size() == 1) {
    std::fill(y.begin(), y.end(), x[0]);
    return y;
  }
  const double step = static_cast<double>(x.size() - 1) / static_cast<double>(out_len - 1);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * step;
    const auto left = std::min(static_cast<std::size_t>(pos), x.size() - 2);
    const double frac = pos - static_cast<double>(left);
    y[i] = (1.0 - frac) * x[left] + frac * x[left + 1];
  }
  return y;
}

std::vector<double> TimeStretch(std::span<const double> x, double stretch,
                                std::size_t fft_size, std::size_t hop) {
  if (!(stretch > 0)) throw ConfigError("stretch factor must be positive");
  const std::size_t out_len =
      static_cast<std::size_t>(std::lround(static_cast<double>(x.size()) * stretch));
  if (x.empty()) return {};

  // Centered STFT.
  const std::size_t pad = fft_size / 2;
  std::vector<double> padded(x.size() + fft_size, 0.0);
  std::copy(x.begin(), x.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));
  const std::size_t frames = x.size() / hop + 1;
  const std::vector<double> window = HannWindow(fft_size);
  RealFft fft(fft_size);
  const std::size_t bins = fft_size / 2 + 1;
  std::vector<std::vector<std::complex<double>>> stft;
  stft.reserve(frames + 1);
  std::vector<double> frame(fft_size);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t i = 0; i < fft_size; ++i) frame[i] = padded[t * hop + i] * window[i];
    stft.push_back(fft.Forward(frame));
  }
  stft.emplace_back(bins, std::complex<double>(0, 0));

  // Resample the frame sequence at 1/stretch, advancing phase coherently.
  const double rate = 1.0 / stretch;
  std::vector<double> advance(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    advance[k] = 2.0 * std::numbers::pi * static_cast<double>(k * hop) /
                 static_cast<double>(fft_size);
  }
  std::vector<double> phase(bins);
  for (std::size_t k = 0; k < bins; ++k) phase[k] = std::arg(stft[0][k]);

  const std::size_t out_frames =
      static_cast<std::size_t>(std::ceil(static_cast<double>(frames) / rate));
  std::vector<double> ola((out_frames - 1) * hop + fft_size, 0.0);
  std::vector<double> norm(ola.size(), 0.0);
  std::vector<std::complex<double>> col(bins);
  for (std::size_t j = 0; j < out_frames; ++j) {
    const double t = static_cast<double>(j) * rate;
    const auto left = std::min(static_cast<std::size_t>(t), frames - 1);
    const double alpha = t - static_cast<double>(left);
    const auto& a = stft[left];
    const auto& b = stft[left + 1];
    for (std::size_t k = 0; k < bins; ++k) {
      const double mag = (1.0 - alpha) * std::abs(a[k]) + alpha * std::abs(b[k]);
      col[k] = std::polar(mag, phase[k]);
      double dphi = std::arg(b[k]) - std::arg(a[k]) - advance[k];
      dphi -= 2.0 * std::numbers::pi * std::round(dphi / (2.0 * std::numbers::pi));
      phase[k] += advance[k] + dphi;
    }
    std::vector<double> y = fft.Inverse(col);
    for (std::size_t i = 0; i < fft_size; ++i) {
      ola[j * hop + i] += y[i] * window[i] / static_cast<double>(fft_size);
      norm[j * hop + i] += window[i] * window[i];
    }
  }
  std::vector<double> out(out_len, 0.0);
  for (std::size_t i = 0; i < out_len && i + pad < ola.size(); ++i) {
    const double n = norm[i + pad];
    out[i] = n > 1e-8 ? ola[i + pad] / n : 0.0;
  }
  return out;
}

std::vector<double> PitchShift(std::span<const double> x, double semitones) {
  const double ratio = std::pow(2.0, semitones / 12.0);
  const std::vector<double> stretched = TimeStretch(x, ratio);
  return ResampleLinear(stretched, x.size());
}

}  // namespace rnncov::dsp
