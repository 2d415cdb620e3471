// Copyright 2026 The roadstress Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Mixed-radix complex FFT (radix 2/3/4/5 butterflies, generic butterfly for
// other prime factors) and 2-D transforms of real planes.
//
// Convention: forward transform is unnormalized, X[k] = sum x[n] e^{-2 pi i kn/N};
// the inverse divides by N.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "roadstress/core/error.hpp"

namespace roadstress {

using Complex = std::complex<double>;

// Plain complex product. operator* goes through the C99 Annex G
// inf/nan recovery path, which is several times slower.
inline Complex cmul(const Complex& a, const Complex& b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    require(n >= 1, Errc::invalid_argument, "fft size must be >= 1");
    twiddles_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      twiddles_[i] = Complex(std::cos(phase), std::sin(phase));
    }
    std::size_t rest = n;
    std::size_t p = 4;
    while (rest > 1) {
      while (rest % p != 0) {
        switch (p) {
          case 4: p = 2; break;
          case 2: p = 3; break;
          default: p += 2; break;
        }
        if (p * p > rest) p = rest;
      }
      rest /= p;
      factors_.push_back(p);
      factors_.push_back(rest);
    }
  }

  std::size_t size() const { return n_; }

  // Forward transform of `in` (read with `in_stride`) into contiguous `out`.
  void forward(const Complex* in, Complex* out, std::size_t in_stride = 1) const {
    if (n_ == 1) {
      out[0] = in[0];
      return;
    }
    work(out, in, 1, in_stride, factors_.data());
  }

  void inverse(const Complex* in, Complex* out, std::size_t in_stride = 1) const {
    std::vector<Complex> tmp(n_);
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = std::conj(in[i * in_stride]);
    forward(tmp.data(), out, 1);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = std::conj(out[i]) * scale;
  }

 private:
  void work(Complex* out, const Complex* f, std::size_t fstride, std::size_t in_stride,
            const std::size_t* factors) const {
    const std::size_t p = factors[0];
    const std::size_t m = factors[1];
    Complex* const begin = out;
    Complex* const end = out + p * m;
    if (m == 1) {
      do {
        *out = *f;
        f += fstride * in_stride;
      } while (++out != end);
    } else {
      do {
        work(out, f, fstride * p, in_stride, factors + 2);
        f += fstride * in_stride;
      } while ((out += m) != end);
    }
    switch (p) {
      case 2: bfly2(begin, fstride, m); break;
      case 3: bfly3(begin, fstride, m); break;
      case 4: bfly4(begin, fstride, m); break;
      case 5: bfly5(begin, fstride, m); break;
      default: bfly_generic(begin, fstride, m, p); break;
    }
  }

  void bfly2(Complex* out, std::size_t fstride, std::size_t m) const {
    Complex* out2 = out + m;
    const Complex* tw = twiddles_.data();
    for (std::size_t k = 0; k < m; ++k) {
      const Complex t = cmul(out2[k], *tw);
      tw += fstride;
      out2[k] = out[k] - t;
      out[k] += t;
    }
  }

  void bfly3(Complex* out, std::size_t fstride, std::size_t m) const {
    const std::size_t m2 = 2 * m;
    const Complex* tw1 = twiddles_.data();
    const Complex* tw2 = twiddles_.data();
    const double epi3 = twiddles_[fstride * m].imag();
    for (std::size_t k = 0; k < m; ++k, ++out) {
      const Complex s1 = cmul(out[m], *tw1);
      const Complex s2 = cmul(out[m2], *tw2);
      const Complex s3 = s1 + s2;
      Complex s0 = s1 - s2;
      tw1 += fstride;
      tw2 += fstride * 2;
      out[m] = out[0] - s3 * 0.5;
      s0 *= epi3;
      out[0] += s3;
      out[m2] = Complex(out[m].real() + s0.imag(), out[m].imag() - s0.real());
      out[m] = Complex(out[m].real() - s0.imag(), out[m].imag() + s0.real());
    }
  }

  void bfly4(Complex* out, std::size_t fstride, std::size_t m) const {
    const std::size_t m2 = 2 * m, m3 = 3 * m;
    const Complex* tw1 = twiddles_.data();
    const Complex* tw2 = twiddles_.data();
    const Complex* tw3 = twiddles_.data();
    for (std::size_t k = 0; k < m; ++k, ++out) {
      const Complex s0 = cmul(out[m], *tw1);
      const Complex s1 = cmul(out[m2], *tw2);
      const Complex s2 = cmul(out[m3], *tw3);
      const Complex s5 = out[0] - s1;
      out[0] += s1;
      const Complex s3 = s0 + s2;
      const Complex s4 = s0 - s2;
      out[m2] = out[0] - s3;
      tw1 += fstride;
      tw2 += fstride * 2;
      tw3 += fstride * 3;
      out[0] += s3;
      out[m] = Complex(s5.real() + s4.imag(), s5.imag() - s4.real());
      out[m3] = Complex(s5.real() - s4.imag(), s5.imag() + s4.real());
    }
  }

  void bfly5(Complex* out, std::size_t fstride, std::size_t m) const {
    const Complex ya = twiddles_[fstride * m];
    const Complex yb = twiddles_[fstride * 2 * m];
    Complex* f0 = out;
    Complex* f1 = out + m;
    Complex* f2 = out + 2 * m;
    Complex* f3 = out + 3 * m;
    Complex* f4 = out + 4 * m;
    const Complex* tw = twiddles_.data();
    for (std::size_t u = 0; u < m; ++u) {
      const Complex s0 = *f0;
      const Complex s1 = cmul(*f1, tw[u * fstride]);
      const Complex s2 = cmul(*f2, tw[2 * u * fstride]);
      const Complex s3 = cmul(*f3, tw[3 * u * fstride]);
      const Complex s4 = cmul(*f4, tw[4 * u * fstride]);
      const Complex s7 = s1 + s4, s10 = s1 - s4, s8 = s2 + s3, s9 = s2 - s3;
      *f0 = s0 + s7 + s8;
      const Complex s5(s0.real() + s7.real() * ya.real() + s8.real() * yb.real(),
                       s0.imag() + s7.imag() * ya.real() + s8.imag() * yb.real());
      const Complex s6(s10.imag() * ya.imag() + s9.imag() * yb.imag(),
                       -(s10.real() * ya.imag()) - s9.real() * yb.imag());
      *f1 = s5 - s6;
      *f4 = s5 + s6;
      const Complex s11(s0.real() + s7.real() * yb.real() + s8.real() * ya.real(),
                        s0.imag() + s7.imag() * yb.real() + s8.imag() * ya.real());
      const Complex s12(-(s10.imag() * yb.imag()) + s9.imag() * ya.imag(),
                        s10.real() * yb.imag() - s9.real() * ya.imag());
      *f2 = s11 + s12;
      *f3 = s11 - s12;
      ++f0, ++f1, ++f2, ++f3, ++f4;
    }
  }

  void bfly_generic(Complex* out, std::size_t fstride, std::size_t m, std::size_t p) const {
    std::vector<Complex> scratch(p);
    for (std::size_t u = 0; u < m; ++u) {
      std::size_t k = u;
      for (std::size_t q = 0; q < p; ++q, k += m) scratch[q] = out[k];
      k = u;
      for (std::size_t q1 = 0; q1 < p; ++q1, k += m) {
        std::size_t twidx = 0;
        out[k] = scratch[0];
        for (std::size_t q = 1; q < p; ++q) {
          twidx += fstride * k;
          twidx %= n_;
          out[k] += cmul(scratch[q], twiddles_[twidx]);
        }
      }
    }
  }

  std::size_t n_;
  std::vector<Complex> twiddles_;
  std::vector<std::size_t> factors_;
};

struct ComplexPlane {
  int width = 0;
  int height = 0;
  std::vector<Complex> data;  // row-major

  Complex& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const Complex& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

// Row transforms followed by column transforms, in place.
inline void fft2_in_place(ComplexPlane& plane, bool inverse) {
  const int w = plane.width, h = plane.height;
  const FftPlan rows(static_cast<std::size_t>(w));
  const FftPlan cols(static_cast<std::size_t>(h));
  std::vector<Complex> buf(std::max(w, h));
  for (int y = 0; y < h; ++y) {
    Complex* row = plane.data.data() + static_cast<std::size_t>(y) * w;
    if (inverse) rows.inverse(row, buf.data()); else rows.forward(row, buf.data());
    std::copy(buf.begin(), buf.begin() + w, row);
  }
  std::vector<Complex> column(h);
  for (int x = 0; x < w; ++x) {
    Complex* col = plane.data.data() + x;
    for (int y = 0; y < h; ++y) column[y] = col[static_cast<std::size_t>(y) * w];
    if (inverse) cols.inverse(column.data(), buf.data()); else cols.forward(column.data(), buf.data());
    for (int y = 0; y < h; ++y) col[static_cast<std::size_t>(y) * w] = buf[y];
  }
}

}  // namespace detail

template <typename T>
ComplexPlane fft2(std::span<const T> samples, int width, int height) {
  require(width >= 1 && height >= 1 &&
              samples.size() == static_cast<std::size_t>(width) * height,
          Errc::invalid_argument, "fft2 plane size mismatch");
  ComplexPlane plane{width, height, std::vector<Complex>(samples.size())};
  for (std::size_t i = 0; i < samples.size(); ++i) plane.data[i] = Complex(samples[i], 0.0);
  detail::fft2_in_place(plane, false);
  return plane;
}

inline ComplexPlane fft2(const ComplexPlane& in) {
  ComplexPlane plane = in;
  detail::fft2_in_place(plane, false);
  return plane;
}

inline ComplexPlane ifft2(const ComplexPlane& spectrum) {
  ComplexPlane plane = spectrum;
  detail::fft2_in_place(plane, true);
  return plane;
}

// Real part of the inverse transform.
inline std::vector<double> ifft2_real(const ComplexPlane& spectrum) {
  const ComplexPlane plane = ifft2(spectrum);
  std::vector<double> out(plane.data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = plane.data[i].real();
  return out;
}

}  // namespace roadstress
