#pragma once

#include <Eigen/Dense>

#include <array>
#include <cassert>

namespace ssst {

// Charts are tiny (s <= 5 spatial dimensions, n = s + 1 <= 6), so all dense
// objects are stack-allocated with a fixed capacity.
constexpr int kMaxDim = 6;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Rank-3 array T(k,i,j), k the contravariant slot for Christoffel symbols.
class Tensor3 {
  public:
    Tensor3() : n_(0) {}
    explicit Tensor3(int n) : n_(n) { data_.fill(0.0); }
    double& operator()(int k, int i, int j) { return data_[(k * n_ + i) * n_ + j]; }
    double operator()(int k, int i, int j) const { return data_[(k * n_ + i) * n_ + j]; }
    int dim() const { return n_; }

  private:
    int n_;
    std::array<double, kMaxDim * kMaxDim * kMaxDim> data_;
};

// Rank-4 array; used for R^l_{ijk} and for dGamma^k_{ij}/dx^m.
class Tensor4 {
  public:
    Tensor4() : n_(0) {}
    explicit Tensor4(int n) : n_(n) { data_.fill(0.0); }
    double& operator()(int a, int b, int c, int d) {
        return data_[((a * n_ + b) * n_ + c) * n_ + d];
    }
    double operator()(int a, int b, int c, int d) const {
        return data_[((a * n_ + b) * n_ + c) * n_ + d];
    }
    int dim() const { return n_; }

  private:
    int n_;
    std::array<double, kMaxDim * kMaxDim * kMaxDim * kMaxDim> data_;
};

inline double sup_norm(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace ssst
