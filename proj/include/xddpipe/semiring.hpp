// Copyright 2026 The xddpipe Authors
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

// Max-plus linear algebra on Eigen containers.
//
// Eigen's own arithmetic operators would use (+, *); every product here is
// spelled out over a semiring policy instead. A policy provides
//
//   using Scalar = ...;
//   Scalar zero() const;  Scalar one() const;
//   Scalar add(Scalar, Scalar) const;  Scalar mul(Scalar, Scalar) const;
//   bool is_zero(const Scalar&) const;
//
// Vectors are rows: (S · M)[j] = ⊕_i S[i] ⊗ M[i,j].

#ifndef XDDPIPE_SEMIRING_HPP
#define XDDPIPE_SEMIRING_HPP

#include <Eigen/Core>
#include <cassert>

#include "xddpipe/ext_time.hpp"
#include "xddpipe/xdd.hpp"

namespace Eigen {

template <>
struct NumTraits<xddpipe::Xdd> : GenericNumTraits<xddpipe::Xdd> {
  typedef xddpipe::Xdd Real;
  typedef xddpipe::Xdd NonInteger;
  typedef xddpipe::Xdd Nested;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 50,
    MulCost = 50
  };
};

template <>
struct NumTraits<xddpipe::ExtTime> : GenericNumTraits<xddpipe::ExtTime> {
  typedef xddpipe::ExtTime Real;
  typedef xddpipe::ExtTime NonInteger;
  typedef xddpipe::ExtTime Nested;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 0,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 2
  };
};

}  // namespace Eigen

namespace xddpipe {

template <typename Scalar>
using SemiringMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using SemiringRow = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// ⟨Z#, max, +, -inf, 0⟩.
struct ExtTimeSemiring {
  using Scalar = ExtTime;
  Scalar zero() const { return ExtTime::neg_inf(); }
  Scalar one() const { return ExtTime(0); }
  Scalar add(Scalar a, Scalar b) const { return a < b ? b : a; }
  Scalar mul(Scalar a, Scalar b) const { return a + b; }
  bool is_zero(Scalar a) const { return a.is_neg_inf(); }
};

/// ⟨XDD, ⊕, ⊗, 𝟘, 𝟙⟩ over one store.
struct XddSemiring {
  using Scalar = Xdd;
  XddStore* store;

  explicit XddSemiring(XddStore& s) : store(&s) {}
  Scalar zero() const { return store->zero(); }
  Scalar one() const { return store->one(); }
  Scalar add(Scalar a, Scalar b) const { return store->apply(BinaryOp::kMax, a, b); }
  Scalar mul(Scalar a, Scalar b) const { return store->apply(BinaryOp::kPlus, a, b); }
  bool is_zero(Scalar a) const { return a == store->zero(); }
};

template <class SR>
SemiringMatrix<typename SR::Scalar> identity(const SR& sr, Eigen::Index n) {
  SemiringMatrix<typename SR::Scalar> m(n, n);
  m.fill(sr.zero());
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = sr.one();
  return m;
}

template <class SR>
SemiringRow<typename SR::Scalar> zeros(const SR& sr, Eigen::Index n) {
  SemiringRow<typename SR::Scalar> v(n);
  v.fill(sr.zero());
  return v;
}

/// ⊕_i u[i] ⊗ v[i]
template <class SR, class U, class V>
typename SR::Scalar dot(const SR& sr, const Eigen::MatrixBase<U>& u, const Eigen::MatrixBase<V>& v) {
  assert(u.size() == v.size());
  typename SR::Scalar acc = sr.zero();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (sr.is_zero(u(i)) || sr.is_zero(v(i))) continue;
    acc = sr.add(acc, sr.mul(u(i), v(i)));
  }
  return acc;
}

/// A(i,j) = ⊕_k B(i,k) ⊗ C(k,j); 𝟘 entries are skipped.
template <class SR, class B, class C>
SemiringMatrix<typename SR::Scalar> mat_mul(const SR& sr, const Eigen::MatrixBase<B>& b,
                                            const Eigen::MatrixBase<C>& c) {
  assert(b.cols() == c.rows());
  SemiringMatrix<typename SR::Scalar> a(b.rows(), c.cols());
  a.fill(sr.zero());
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index k = 0; k < b.cols(); ++k) {
      if (sr.is_zero(b(i, k))) continue;
      for (Eigen::Index j = 0; j < c.cols(); ++j) {
        if (sr.is_zero(c(k, j))) continue;
        a(i, j) = sr.add(a(i, j), sr.mul(b(i, k), c(k, j)));
      }
    }
  return a;
}

/// Row vector times matrix.
template <class SR, class S, class M>
SemiringRow<typename SR::Scalar> vec_mat(const SR& sr, const Eigen::MatrixBase<S>& s,
                                         const Eigen::MatrixBase<M>& m) {
  assert(s.size() == m.rows());
  SemiringRow<typename SR::Scalar> out = zeros(sr, m.cols());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (sr.is_zero(s(i))) continue;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (sr.is_zero(m(i, j))) continue;
      out(j) = sr.add(out(j), sr.mul(s(i), m(i, j)));
    }
  }
  return out;
}

/// Componentwise ⊕.
template <class SR, class U, class V>
SemiringRow<typename SR::Scalar> vec_oplus(const SR& sr, const Eigen::MatrixBase<U>& u,
                                           const Eigen::MatrixBase<V>& v) {
  assert(u.size() == v.size());
  SemiringRow<typename SR::Scalar> out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) out(i) = sr.add(u(i), v(i));
  return out;
}

// Elementary matrices. `rho` is the time pointer index.

template <class SR>
SemiringMatrix<typename SR::Scalar> m_reset(const SR& sr, Eigen::Index n, Eigen::Index rho) {
  auto m = identity(sr, n);
  m(rho, rho) = sr.zero();
  return m;
}

template <class SR>
SemiringMatrix<typename SR::Scalar> m_wait(const SR& sr, Eigen::Index n, Eigen::Index rho,
                                           Eigen::Index x) {
  auto m = identity(sr, n);
  m(x, rho) = sr.one();
  return m;
}

template <class SR>
SemiringMatrix<typename SR::Scalar> m_move(const SR& sr, Eigen::Index n, Eigen::Index src,
                                           Eigen::Index dest) {
  auto m = identity(sr, n);
  m(dest, dest) = sr.zero();
  m(src, dest) = sr.one();
  return m;
}

template <class SR>
SemiringMatrix<typename SR::Scalar> m_consume(const SR& sr, Eigen::Index n, Eigen::Index rho,
                                              const typename SR::Scalar& lambda) {
  auto m = identity(sr, n);
  m(rho, rho) = lambda;
  return m;
}

}  // namespace xddpipe

#endif  // XDDPIPE_SEMIRING_HPP
