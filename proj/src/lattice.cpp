// Copyright 2026 The latcf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "latcf/lattice.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "latcf/random.hpp"

namespace latcf {

namespace {

constexpr double kTieTol = 1e-12;
// Fixed-seed sample count for the cached second-moment estimate of
// generator-matrix lattices (relative standard error a few 1e-3).
constexpr std::int64_t kSigma2Trials = 1 << 16;

void check_dim(int expected, std::size_t got, const char* what) {
  if (static_cast<std::size_t>(expected) != got) {
    std::ostringstream os;
    os << what << ": expected dimension " << expected << ", got " << got;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

struct Lattice::Impl {
  int n = 0;
  bool cubic = false;
  double scale = 1.0;
  std::uint64_t budget = Lattice::kDefaultNodeBudget;
  double volume = 0.0;
  double sigma2 = 0.0;
  // Generator-matrix machinery; unused for scaled-integer lattices.
  Eigen::MatrixXd basis;      // columns are basis vectors
  Eigen::MatrixXd basis_inv;
  Eigen::MatrixXd qt;         // Q^T from the QR factorization of basis
  Eigen::MatrixXd r;          // upper triangular, positive diagonal
};

namespace {

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// Exact closest-vector search (Schnorr-Euchner enumeration on the QR
// factorization). Returns the integer coordinates of the nearest lattice
// point; among exactly tied candidates the lexicographically smallest
// coordinate vector wins.
std::vector<long long> se_closest(const Lattice::Impl& L,
                                  std::span<const double> x) {
  const int n = L.n;
  Eigen::VectorXd xv(n);
  for (int i = 0; i < n; ++i) xv[i] = x[i];
  const Eigen::VectorXd yb = L.qt * xv;
  const Eigen::MatrixXd& R = L.r;

  std::vector<double> proj(n, 0.0), partial(n, 0.0), z(n, 0.0), delta(n, 0.0);
  std::vector<double> best_z;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t nodes = 0;

  auto enter_level = [&](int lvl, double dist_above) {
    partial[lvl] = dist_above;
    double acc = yb[lvl];
    for (int j = lvl + 1; j < n; ++j) acc -= R(lvl, j) * z[j];
    proj[lvl] = acc;
    const double c = acc / R(lvl, lvl);
    z[lvl] = std::nearbyint(c);
    delta[lvl] = (c - z[lvl]) >= 0.0 ? 1.0 : -1.0;
  };
  auto advance = [&](int lvl) {
    z[lvl] += delta[lvl];
    delta[lvl] = -delta[lvl] - (delta[lvl] > 0.0 ? 1.0 : -1.0);
  };

  int i = n - 1;
  enter_level(i, 0.0);
  while (true) {
    if (++nodes > L.budget) {
      throw budget_error("closest-point search budget exceeded (" +
                         std::to_string(L.budget) + " nodes)");
    }
    const double t = proj[i] - R(i, i) * z[i];
    const double d = partial[i] + t * t;
    const double window =
        std::isinf(best) ? 0.0 : kTieTol * (1.0 + best);
    if (d <= best + window) {
      if (i == 0) {
        if (d < best - window) {
          best = d;
          best_z = z;
        } else if (lex_less(z, best_z)) {
          best_z = z;
        }
        advance(0);
      } else {
        --i;
        enter_level(i, d);
      }
    } else {
      // All remaining candidates at this level are at least as far.
      if (i == n - 1) break;
      ++i;
      advance(i);
    }
  }

  std::vector<long long> out(n);
  for (int j = 0; j < n; ++j) out[j] = static_cast<long long>(best_z[j]);
  return out;
}

}  // namespace

Lattice::Lattice(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Lattice Lattice::scaled_integer(int dim, double scale) {
  if (dim < 1) throw std::invalid_argument("lattice dimension must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("lattice scale must be positive and finite");
  }
  auto impl = std::make_shared<Impl>();
  impl->n = dim;
  impl->cubic = true;
  impl->scale = scale;
  impl->volume = std::pow(scale, dim);
  impl->sigma2 = scale * scale / 12.0;  // exact for a cube
  return Lattice(std::move(impl));
}

Lattice Lattice::from_generator(int dim, const std::vector<double>& basis_rows,
                                std::uint64_t node_budget) {
  if (dim < 1) throw std::invalid_argument("lattice dimension must be >= 1");
  if (basis_rows.size() != static_cast<std::size_t>(dim) * dim) {
    throw std::invalid_argument("generator matrix must be dim x dim");
  }
  auto impl = std::make_shared<Impl>();
  impl->n = dim;
  impl->cubic = false;
  impl->budget = node_budget;
  impl->basis.resize(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const double v = basis_rows[static_cast<std::size_t>(r) * dim + c];
      if (!std::isfinite(v)) {
        throw std::invalid_argument("generator matrix entries must be finite");
      }
      impl->basis(c, r) = v;  // row r of the input is basis vector r
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(impl->basis);
  const double det = lu.determinant();
  const double scale_ref = impl->basis.cwiseAbs().maxCoeff();
  if (!(std::abs(det) > 1e-12 * std::pow(std::max(scale_ref, 1e-300), dim))) {
    throw std::invalid_argument("generator matrix is singular or badly rank-deficient");
  }
  impl->volume = std::abs(det);
  impl->basis_inv = lu.inverse();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(impl->basis);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    if (r(i, i) < 0.0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  impl->qt = q.transpose();
  impl->r = r;

  // Cache the Voronoi second moment with a fixed-seed Monte Carlo pass.
  Lattice lat(impl);
  impl->sigma2 = estimate_second_moment(lat, kSigma2Trials).value;
  return lat;
}

Lattice Lattice::from_file(const std::string& path, std::uint64_t node_budget) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open lattice file: " + path);
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  if (!in.eof()) {
    throw std::invalid_argument("non-numeric data in lattice file: " + path);
  }
  const auto count = vals.size();
  const int n = static_cast<int>(std::llround(std::sqrt(double(count))));
  if (count == 0 || static_cast<std::size_t>(n) * n != count) {
    throw std::invalid_argument("lattice file must contain a square matrix: " +
                                path);
  }
  return from_generator(n, vals, node_budget);
}

int Lattice::dim() const { return impl_->n; }
double Lattice::volume() const { return impl_->volume; }
double Lattice::second_moment() const { return impl_->sigma2; }
bool Lattice::is_scaled_integer() const { return impl_->cubic; }
std::uint64_t Lattice::node_budget() const { return impl_->budget; }

double Lattice::scale() const {
  if (!impl_->cubic) {
    throw std::invalid_argument("scale() is defined for scaled-integer lattices only");
  }
  return impl_->scale;
}

Vec Lattice::quantize(std::span<const double> x) const {
  check_dim(impl_->n, x.size(), "quantize");
  const int n = impl_->n;
  Vec q(n);
  if (impl_->cubic) {
    const double s = impl_->scale;
    for (int i = 0; i < n; ++i) q[i] = s * std::nearbyint(x[i] / s);
    return q;
  }
  const auto z = se_closest(*impl_, x);
  Eigen::VectorXd zv(n);
  for (int i = 0; i < n; ++i) zv[i] = static_cast<double>(z[i]);
  Eigen::VectorXd p = impl_->basis * zv;
  for (int i = 0; i < n; ++i) q[i] = p[i];
  return q;
}

Vec Lattice::mod(std::span<const double> x) const {
  Vec q = quantize(x);
  for (int i = 0; i < impl_->n; ++i) q[i] = x[i] - q[i];
  return q;
}

Vec Lattice::point_from_coords(std::span<const long long> z) const {
  check_dim(impl_->n, z.size(), "point_from_coords");
  const int n = impl_->n;
  Vec p(n);
  if (impl_->cubic) {
    for (int i = 0; i < n; ++i) p[i] = impl_->scale * static_cast<double>(z[i]);
    return p;
  }
  Eigen::VectorXd zv(n);
  for (int i = 0; i < n; ++i) zv[i] = static_cast<double>(z[i]);
  Eigen::VectorXd pv = impl_->basis * zv;
  for (int i = 0; i < n; ++i) p[i] = pv[i];
  return p;
}

std::vector<long long> Lattice::coords_of(std::span<const double> point,
                                          double tol) const {
  check_dim(impl_->n, point.size(), "coords_of");
  const int n = impl_->n;
  std::vector<long long> z(n);
  double worst = 0.0;
  if (impl_->cubic) {
    for (int i = 0; i < n; ++i) {
      const double c = point[i] / impl_->scale;
      const double zi = std::nearbyint(c);
      worst = std::max(worst, std::abs(c - zi));
      z[i] = static_cast<long long>(zi);
    }
  } else {
    Eigen::VectorXd pv(n);
    for (int i = 0; i < n; ++i) pv[i] = point[i];
    Eigen::VectorXd c = impl_->basis_inv * pv;
    for (int i = 0; i < n; ++i) {
      const double zi = std::nearbyint(c[i]);
      worst = std::max(worst, std::abs(c[i] - zi));
      z[i] = static_cast<long long>(zi);
    }
  }
  if (worst > tol) {
    std::ostringstream os;
    os << "point is not on the lattice (coordinate residual " << worst
       << " exceeds tolerance " << tol << ")";
    throw std::invalid_argument(os.str());
  }
  return z;
}

Vec Lattice::point_from_fractional(std::span<const double> t) const {
  check_dim(impl_->n, t.size(), "point_from_fractional");
  const int n = impl_->n;
  Vec p(n);
  if (impl_->cubic) {
    for (int i = 0; i < n; ++i) p[i] = impl_->scale * t[i];
    return p;
  }
  Eigen::VectorXd tv(n);
  for (int i = 0; i < n; ++i) tv[i] = t[i];
  Eigen::VectorXd pv = impl_->basis * tv;
  for (int i = 0; i < n; ++i) p[i] = pv[i];
  return p;
}

Lattice Lattice::scaled_by(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("lattice scale factor must be positive");
  }
  auto impl = std::make_shared<Impl>(*impl_);
  if (impl->cubic) {
    impl->scale *= factor;
    impl->volume = std::pow(impl->scale, impl->n);
    impl->sigma2 = impl->scale * impl->scale / 12.0;
  } else {
    impl->basis *= factor;
    impl->basis_inv /= factor;
    impl->r *= factor;
    impl->volume *= std::pow(factor, impl->n);
    impl->sigma2 *= factor * factor;  // scaling law, no re-estimation
  }
  return Lattice(std::move(impl));
}

Lattice Lattice::with_second_moment(double target) const {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw std::invalid_argument("target second moment must be positive");
  }
  Lattice scaled = scaled_by(std::sqrt(target / impl_->sigma2));
  auto impl = std::make_shared<Impl>(*scaled.impl_);
  impl->sigma2 = target;
  if (impl->cubic) impl->scale = std::sqrt(12.0 * target);
  return Lattice(std::move(impl));
}

Lattice Lattice::with_node_budget(std::uint64_t budget) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->budget = budget;
  return Lattice(std::move(impl));
}

namespace lattices {

Lattice d4(std::uint64_t node_budget) {
  return Lattice::from_generator(4,
                                 {
                                     -1, -1, 0, 0,  //
                                     1, -1, 0, 0,   //
                                     0, 1, -1, 0,   //
                                     0, 0, 1, -1,   //
                                 },
                                 node_budget);
}

Lattice e8(std::uint64_t node_budget) {
  return Lattice::from_generator(
      8,
      {
          2,   0,   0,   0,   0,   0,   0,   0,    //
          -1,  1,   0,   0,   0,   0,   0,   0,    //
          0,   -1,  1,   0,   0,   0,   0,   0,    //
          0,   0,   -1,  1,   0,   0,   0,   0,    //
          0,   0,   0,   -1,  1,   0,   0,   0,    //
          0,   0,   0,   0,   -1,  1,   0,   0,    //
          0,   0,   0,   0,   0,   -1,  1,   0,    //
          0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5,  //
      },
      node_budget);
}

}  // namespace lattices

}  // namespace latcf
