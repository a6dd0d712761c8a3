#include "spinsim/signal_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinsim {

void fft_radix2(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft_radix2: size must be a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const double pi = 3.14159265358979323846;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = data[i + k];
        const std::complex<double> v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> hilbert_envelope(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 4) return x;
  // even (mirror) extension, then zero-pad to a power of two
  std::vector<std::complex<double>> buf;
  const std::size_t m = next_pow2(2 * n);
  buf.assign(m, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i];
  for (std::size_t i = 0; i < n; ++i) buf[n + i] = x[n - 1 - i];
  fft_radix2(buf, false);
  // analytic signal: zero the negative frequencies, double the positive ones
  for (std::size_t i = 1; i < m / 2; ++i) buf[i] *= 2.0;
  for (std::size_t i = m / 2 + 1; i < m; ++i) buf[i] = 0.0;
  fft_radix2(buf, true);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(buf[i]) / static_cast<double>(m);
  return env;
}

std::vector<double> peak_envelope(const std::vector<double>& t, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = std::abs(x[i]);
    if (a >= std::abs(x[i - 1]) && a >= std::abs(x[i + 1])) peaks.push_back(i);
  }
  if (peaks.size() < 2) {
    std::vector<double> env(n);
    for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(x[i]);
    return env;
  }
  std::vector<double> env(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (seg + 1 < peaks.size() && t[peaks[seg + 1]] < t[i]) ++seg;
    const std::size_t a = peaks[std::min(seg, peaks.size() - 1)];
    const std::size_t b = peaks[std::min(seg + 1, peaks.size() - 1)];
    if (a == b || t[b] == t[a]) {
      env[i] = std::abs(x[a]);
    } else {
      const double w = std::clamp((t[i] - t[a]) / (t[b] - t[a]), 0.0, 1.0);
      env[i] = (1.0 - w) * std::abs(x[a]) + w * std::abs(x[b]);
    }
  }
  return env;
}

int count_sign_changes(const std::vector<double>& x) {
  int changes = 0;
  double prev = 0.0;
  for (double v : x) {
    if (v == 0.0) continue;
    if (prev != 0.0 && std::signbit(v) != std::signbit(prev)) ++changes;
    prev = v;
  }
  return changes;
}

std::vector<double> envelope(const std::vector<double>& t, const std::vector<double>& x) {
  if (count_sign_changes(x) < 6) {
    std::vector<double> env(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) env[i] = std::abs(x[i]);
    return env;
  }
  (void)t;
  std::vector<double> env = hilbert_envelope(x);
  // clamp the transform's edge artifacts to the nearest interior value
  const std::size_t trim = std::max<std::size_t>(2, env.size() / 50);
  if (env.size() > 2 * trim + 1) {
    for (std::size_t i = 0; i < trim; ++i) env[i] = env[trim];
    for (std::size_t i = env.size() - trim; i < env.size(); ++i) {
      env[i] = env[env.size() - trim - 1];
    }
  }
  return env;
}

double first_crossing_below(const std::vector<double>& t, const std::vector<double>& y,
                            double target) {
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] < target && y[i - 1] >= target) {
      const double span = y[i - 1] - y[i];
      const double w = span > 0.0 ? (y[i - 1] - target) / span : 0.0;
      return t[i - 1] + w * (t[i] - t[i - 1]);
    }
  }
  return -1.0;
}

double interp_at(const std::vector<double>& t, const std::vector<double>& y, double tq) {
  if (t.empty()) throw std::invalid_argument("interp_at: empty input");
  if (tq <= t.front()) return y.front();
  if (tq >= t.back()) return y.back();
  const auto it = std::lower_bound(t.begin(), t.end(), tq);
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  const double w = (tq - t[i - 1]) / (t[i] - t[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

std::vector<double> dominant_frequencies(const std::vector<double>& x, double dt,
                                         std::size_t count) {
  const std::size_t n = x.size();
  const std::size_t m = next_pow2(n);
  std::vector<std::complex<double>> buf(m, {0.0, 0.0});
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i] - mean;
  fft_radix2(buf, false);
  std::vector<double> mag(m / 2);
  for (std::size_t i = 0; i < m / 2; ++i) mag[i] = std::abs(buf[i]);

  const double pi = 3.14159265358979323846;
  std::vector<double> freqs;
  std::vector<bool> used(m / 2, false);
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 1; i + 1 < m / 2; ++i) {
      if (used[i]) continue;
      if (mag[i] > best_mag && mag[i] >= mag[i - 1] && mag[i] >= mag[i + 1]) {
        best = i;
        best_mag = mag[i];
      }
    }
    if (best == 0) break;
    // suppress the located peak and its shoulders for the next pass
    for (std::size_t j = best > 2 ? best - 2 : 0; j <= best + 2 && j < m / 2; ++j) {
      used[j] = true;
    }
    // quadratic interpolation around the maximum bin
    const double ym = mag[best - 1], y0 = mag[best], yp = mag[best + 1];
    const double denom = ym - 2.0 * y0 + yp;
    const double shift = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
    const double bin = static_cast<double>(best) + shift;
    freqs.push_back(2.0 * pi * bin / (static_cast<double>(m) * dt));
  }
  return freqs;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("least_squares: need at least two points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("least_squares: degenerate abscissae");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace spinsim
