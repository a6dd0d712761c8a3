#pragma once

// Small signal-processing toolbox: radix-2 FFT, analytic-signal envelopes,
// spectral peak location and least-squares helpers for the coherence fits.

#include <complex>
#include <vector>

namespace spinsim {

// In-place radix-2 FFT; size must be a power of two. inverse = true applies
// the unnormalized inverse transform (caller divides by n).
void fft_radix2(std::vector<std::complex<double>>& data, bool inverse);

std::size_t next_pow2(std::size_t n);

// Magnitude of the analytic signal of x. The signal is mirror-extended and
// zero-padded before the transform to tame edge artifacts.
std::vector<double> hilbert_envelope(const std::vector<double>& x);

// Envelope by local-peak interpolation of |x|; robust for slow oscillations.
std::vector<double> peak_envelope(const std::vector<double>& t, const std::vector<double>& x);

int count_sign_changes(const std::vector<double>& x);

// Envelope dispatcher: analytic-signal magnitude for oscillatory traces,
// |x| passthrough for monotone decays (fewer than 6 sign changes).
std::vector<double> envelope(const std::vector<double>& t, const std::vector<double>& x);

// First t where y (linearly interpolated) crosses below target; returns a
// negative value when no crossing occurs.
double first_crossing_below(const std::vector<double>& t, const std::vector<double>& y,
                            double target);

// Linear interpolation of (t, y) at query point tq (t ascending).
double interp_at(const std::vector<double>& t, const std::vector<double>& y, double tq);

// Dominant angular frequencies (rad per t-unit) of x sampled at spacing dt,
// strongest first, refined by quadratic interpolation around the bin maxima.
std::vector<double> dominant_frequencies(const std::vector<double>& x, double dt,
                                         std::size_t count);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace spinsim
