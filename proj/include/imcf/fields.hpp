#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

#include "imcf/domain.hpp"

namespace imcf {

// Packed index of the symmetric pair (i,j), i <= j, within n(n+1)/2 slots.
inline int sym2_index(int n, int i, int j) {
  if (i > j) { int t = i; i = j; j = t; }
  return i * n - i * (i - 1) / 2 + (j - i);
}
inline int sym2_count(int n) { return n * (n + 1) / 2; }

// Packed index of the antisymmetric pair (i,j), i < j, within n(n-1)/2 slots.
inline int pair_index(int n, int i, int j) {
  assert(i < j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}
inline int pair_count(int n) { return n * (n - 1) / 2; }

// Component-major field storage: component c occupies a contiguous grid slab,
// so stencil kernels stream through memory one scalar slab at a time.
class FieldBase {
public:
  const DomainSpec& dom() const { return dom_; }
  int ncomp() const { return ncomp_; }
  std::size_t npoints() const { return npts_; }

  double* comp(int c) { return data_.data() + static_cast<std::size_t>(c) * npts_; }
  const double* comp(int c) const { return data_.data() + static_cast<std::size_t>(c) * npts_; }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  void fill(double v) { data_.assign(data_.size(), v); }

protected:
  FieldBase() : ncomp_(0), npts_(0) {}
  FieldBase(const DomainSpec& dom, int ncomp)
      : dom_(dom), ncomp_(ncomp), npts_(dom.num_points()),
        data_(static_cast<std::size_t>(ncomp) * dom.num_points(), 0.0) {}

  DomainSpec dom_;
  int ncomp_;
  std::size_t npts_;
  std::vector<double> data_;
};

class ScalarField : public FieldBase {
public:
  ScalarField() = default;
  explicit ScalarField(const DomainSpec& dom) : FieldBase(dom, 1) {}
  double& operator()(std::size_t p) { return data_[p]; }
  double operator()(std::size_t p) const { return data_[p]; }
};

class VectorField : public FieldBase {
public:
  VectorField() = default;
  explicit VectorField(const DomainSpec& dom) : FieldBase(dom, dom.n) {}
  double& operator()(std::size_t p, int i) { return data_[i * npts_ + p]; }
  double operator()(std::size_t p, int i) const { return data_[i * npts_ + p]; }
};

// Symmetric rank-2 tensor; the (i,j) <-> (j,i) identification is a storage
// fact, so declared symmetry holds bit-exactly by construction.
class Sym2Field : public FieldBase {
public:
  Sym2Field() = default;
  explicit Sym2Field(const DomainSpec& dom) : FieldBase(dom, sym2_count(dom.n)) {}
  double& operator()(std::size_t p, int i, int j) {
    return data_[static_cast<std::size_t>(sym2_index(dom_.n, i, j)) * npts_ + p];
  }
  double operator()(std::size_t p, int i, int j) const {
    return data_[static_cast<std::size_t>(sym2_index(dom_.n, i, j)) * npts_ + p];
  }
};

// S_{i,jk}, symmetric in (jk) only: covariant derivative of a Sym2Field.
class Sym3Field : public FieldBase {
public:
  Sym3Field() = default;
  explicit Sym3Field(const DomainSpec& dom) : FieldBase(dom, dom.n * sym2_count(dom.n)) {}
  double& operator()(std::size_t p, int i, int j, int k) {
    return data_[idx(i, j, k) * npts_ + p];
  }
  double operator()(std::size_t p, int i, int j, int k) const {
    return data_[idx(i, j, k) * npts_ + p];
  }

private:
  std::size_t idx(int i, int j, int k) const {
    return static_cast<std::size_t>(i) * sym2_count(dom_.n) + sym2_index(dom_.n, j, k);
  }
};

// Gamma^k_{ij}, symmetric in the lower pair (ij).
class ChristoffelField : public FieldBase {
public:
  ChristoffelField() = default;
  explicit ChristoffelField(const DomainSpec& dom) : FieldBase(dom, dom.n * sym2_count(dom.n)) {}
  double& operator()(std::size_t p, int k, int i, int j) {
    return data_[idx(k, i, j) * npts_ + p];
  }
  double operator()(std::size_t p, int k, int i, int j) const {
    return data_[idx(k, i, j) * npts_ + p];
  }

private:
  std::size_t idx(int k, int i, int j) const {
    return static_cast<std::size_t>(k) * sym2_count(dom_.n) + sym2_index(dom_.n, i, j);
  }
};

// General rank-2 tensor without index symmetry (e.g. nabla_i V_j).
class Tensor2Field : public FieldBase {
public:
  Tensor2Field() = default;
  explicit Tensor2Field(const DomainSpec& dom) : FieldBase(dom, dom.n * dom.n) {}
  double& operator()(std::size_t p, int i, int j) {
    return data_[(static_cast<std::size_t>(i) * dom_.n + j) * npts_ + p];
  }
  double operator()(std::size_t p, int i, int j) const {
    return data_[(static_cast<std::size_t>(i) * dom_.n + j) * npts_ + p];
  }
};

// U_{m i jk}: second covariant derivative of a Sym2Field (no symmetry in m,i).
class Tensor4Field : public FieldBase {
public:
  Tensor4Field() = default;
  explicit Tensor4Field(const DomainSpec& dom)
      : FieldBase(dom, dom.n * dom.n * sym2_count(dom.n)) {}
  double& operator()(std::size_t p, int m, int i, int j, int k) {
    return data_[idx(m, i, j, k) * npts_ + p];
  }
  double operator()(std::size_t p, int m, int i, int j, int k) const {
    return data_[idx(m, i, j, k) * npts_ + p];
  }

private:
  std::size_t idx(int m, int i, int j, int k) const {
    return (static_cast<std::size_t>(m) * dom_.n + i) * sym2_count(dom_.n) +
           sym2_index(dom_.n, j, k);
  }
};

// C_{ijk} antisymmetric in (ij) exactly by packed storage (Codazzi residual).
class CodazziField : public FieldBase {
public:
  CodazziField() = default;
  explicit CodazziField(const DomainSpec& dom)
      : FieldBase(dom, pair_count(dom.n) * dom.n), npairs_(pair_count(dom.n)) {}

  double operator()(std::size_t p, int i, int j, int k) const {
    if (i == j) return 0.0;
    double s = 1.0;
    if (i > j) { int t = i; i = j; j = t; s = -s; }
    return s * data_[static_cast<std::size_t>(pair_index(dom_.n, i, j) * dom_.n + k) * npts_ + p];
  }
  // Packed write access: a = pair_index(i<j), third index k.
  double& packed(std::size_t p, int a, int k) {
    return data_[static_cast<std::size_t>(a * dom_.n + k) * npts_ + p];
  }
  int npairs() const { return npairs_; }

private:
  int npairs_ = 0;
};

// R_{ijkl} with antisymmetry in (ij) and (kl) and pair-exchange symmetry, all
// exact by packing into a symmetric matrix over antisymmetric pairs. The first
// Bianchi identity is NOT enforced by the layout; its residual is a reported
// discretization health metric.
class Riem4Field : public FieldBase {
public:
  Riem4Field() = default;
  explicit Riem4Field(const DomainSpec& dom)
      : FieldBase(dom, sym2_count(pair_count(dom.n))), npairs_(pair_count(dom.n)) {}

  double operator()(std::size_t p, int i, int j, int k, int l) const {
    if (i == j || k == l) return 0.0;
    double s = 1.0;
    if (i > j) { int t = i; i = j; j = t; s = -s; }
    if (k > l) { int t = k; k = l; l = t; s = -s; }
    int a = pair_index(dom_.n, i, j);
    int b = pair_index(dom_.n, k, l);
    return s * data_[static_cast<std::size_t>(sym2_index(npairs_, a, b)) * npts_ + p];
  }

  // Direct packed access for assembly: pair indices a <= b in canonical order.
  double& packed(std::size_t p, int a, int b) {
    return data_[static_cast<std::size_t>(sym2_index(npairs_, a, b)) * npts_ + p];
  }
  double packed(std::size_t p, int a, int b) const {
    return data_[static_cast<std::size_t>(sym2_index(npairs_, a, b)) * npts_ + p];
  }
  int npairs() const { return npairs_; }

private:
  int npairs_ = 0;
};

}  // namespace imcf
