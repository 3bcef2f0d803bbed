// Copyright 2026 The qprojfilter Authors
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

#include <complex>
#include <random>
#include <vector>

#include "qpf/operator_algebra.hpp"

namespace qpf::testing {

// Plain row-major matrices with hand-written loops. The oracles below use
// only these, so they share no code path with the Eigen-based library.
struct Naive {
  int n = 0;
  std::vector<std::complex<double>> a;

  explicit Naive(int dim) : n(dim), a(static_cast<std::size_t>(dim * dim)) {}
  std::complex<double>& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  std::complex<double> operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

inline Naive from_eigen(const ComplexMatrix& m) {
  Naive out(static_cast<int>(m.rows()));
  for (int i = 0; i < out.n; ++i)
    for (int j = 0; j < out.n; ++j) out(i, j) = m(i, j);
  return out;
}

inline ComplexMatrix to_eigen(const Naive& m) {
  ComplexMatrix out(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) out(i, j) = m(i, j);
  return out;
}

inline Naive mul(const Naive& x, const Naive& y) {
  Naive out(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      std::complex<double> s = 0;
      for (int k = 0; k < x.n; ++k) s += x(i, k) * y(k, j);
      out(i, j) = s;
    }
  return out;
}

inline Naive add(const Naive& x, const Naive& y, std::complex<double> cy = 1.0) {
  Naive out(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] + cy * y.a[i];
  return out;
}

inline Naive scale(const Naive& x, std::complex<double> c) {
  Naive out(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = c * x.a[i];
  return out;
}

inline Naive dagger(const Naive& x) {
  Naive out(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) out(i, j) = std::conj(x(j, i));
  return out;
}

inline std::complex<double> trace(const Naive& x) {
  std::complex<double> s = 0;
  for (int i = 0; i < x.n; ++i) s += x(i, i);
  return s;
}

// Heisenberg generator i[H,X] + L^dag X L - (L^dag L X + X L^dag L)/2.
inline Naive naive_lindblad(const Naive& h, const Naive& l, const Naive& x) {
  const std::complex<double> i(0, 1);
  const Naive ld = dagger(l);
  const Naive ldl = mul(ld, l);
  Naive out = scale(add(mul(h, x), mul(x, h), -1.0), i);
  out = add(out, mul(mul(ld, x), l));
  out = add(out, add(mul(ldl, x), mul(x, ldl)), -0.5);
  return out;
}

// State drift -i[H,rho] + L rho L^dag - (L^dag L rho + rho L^dag L)/2.
inline Naive naive_adjoint_lindblad(const Naive& h, const Naive& l, const Naive& rho) {
  const std::complex<double> i(0, 1);
  const Naive ld = dagger(l);
  const Naive ldl = mul(ld, l);
  Naive out = scale(add(mul(h, rho), mul(rho, h), -1.0), -i);
  out = add(out, mul(mul(l, rho), ld));
  out = add(out, add(mul(ldl, rho), mul(rho, ldl)), -0.5);
  return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline ComplexMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {d(rng), d(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const ComplexMatrix m = random_matrix(n, rng);
  return (m + m.adjoint()) / 2.0;
}

// Full-rank density matrix G G^dag / Tr(G G^dag).
inline ComplexMatrix random_density(int n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_matrix(n, rng);
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
  const int n = static_cast<int>(values.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  int i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

inline ComplexMatrix unit(int n, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

// Four-level model: H = 0, L = diag(1,-1,1,-1) + offdiag |3><0|.
inline ComplexMatrix four_level_coupling(double offdiag = 0.3) {
  return diag({1, -1, 1, -1}) + offdiag * unit(4, 3, 0);
}

inline ComplexMatrix four_level_rho0() { return diag({0.125, 0.125, 0.375, 0.375}); }

inline std::vector<ComplexMatrix> diagonal_projectors(int n) {
  std::vector<ComplexMatrix> out;
  for (int i = 0; i < n; ++i) out.push_back(unit(n, i, i));
  return out;
}

}  // namespace qpf::testing
