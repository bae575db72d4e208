#pragma once
// Periodic lattice on the centered box [-L/2, L/2)^d with n sites per axis.
// Site coordinates are x_i = -L/2 + i h, h = L/n; dual frequencies are
// xi_k = 2 pi k / L with k in {-n/2, ..., n/2-1} (n even) or the symmetric
// range for odd n. Axis 0 varies fastest in the flat site index.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace relop {

struct LatticeGrid {
  int d = 1;
  int n = 8;
  double box_length = 2.0 * M_PI;

  LatticeGrid() = default;
  LatticeGrid(int d_, int n_, double box_length_)
      : d(d_), n(n_), box_length(box_length_) {
    if (d < 1 || d > 3)
      throw std::invalid_argument("LatticeGrid: d must be 1, 2 or 3");
    if (n < 4)
      throw std::invalid_argument("LatticeGrid: n must be at least 4");
    if (!(box_length > 0.0))
      throw std::invalid_argument("LatticeGrid: box_length must be positive");
  }

  double h() const { return box_length / n; }
  long total_sites() const {
    long s = 1;
    for (int j = 0; j < d; ++j) s *= n;
    return s;
  }
  bool power_of_two() const { return (n & (n - 1)) == 0; }

  // flat index <-> multi-index
  std::array<int, 3> unflatten(long idx) const {
    std::array<int, 3> i{0, 0, 0};
    for (int j = 0; j < d; ++j) {
      i[j] = int(idx % n);
      idx /= n;
    }
    return i;
  }
  long flatten(const std::array<int, 3>& i) const {
    long idx = 0;
    for (int j = d - 1; j >= 0; --j) idx = idx * n + ((i[j] % n + n) % n);
    return idx;
  }
  long shift(long idx, int axis, int steps) const {
    auto i = unflatten(idx);
    i[axis] += steps;
    return flatten(i);
  }

  double coord(int i) const { return -0.5 * box_length + i * h(); }
  Eigen::VectorXd site_coords(long idx) const {
    auto i = unflatten(idx);
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x[j] = coord(i[j]);
    return x;
  }

  // signed dual index for axis position i
  int freq_index(int i) const { return i <= (n - 1) / 2 ? i : i - n; }
  double freq(int i) const { return 2.0 * M_PI * freq_index(i) / box_length; }

  // minimal-image scalar displacement
  double wrap(double dx) const {
    double L = box_length;
    dx = std::fmod(dx, L);
    if (dx < -0.5 * L) dx += L;
    if (dx >= 0.5 * L) dx -= L;
    return dx;
  }
  // wrap a point into [-L/2, L/2)
  double wrap_point(double x) const { return wrap(x); }

  // minimal-image displacement between sites a and b (coords of a - b)
  Eigen::VectorXd displacement(long a, long b) const {
    auto ia = unflatten(a), ib = unflatten(b);
    Eigen::VectorXd dx(d);
    for (int j = 0; j < d; ++j) {
      int di = ia[j] - ib[j];
      if (di < -n / 2) di += n;
      if (di > (n - 1) / 2) di -= n;
      dx[j] = di * h();
    }
    return dx;
  }

  bool operator==(const LatticeGrid& o) const {
    return d == o.d && n == o.n && box_length == o.box_length;
  }
};

struct GridFunction {
  LatticeGrid grid;
  Eigen::VectorXcd values;

  GridFunction() = default;
  explicit GridFunction(const LatticeGrid& g)
      : grid(g), values(Eigen::VectorXcd::Zero(g.total_sites())) {}
  GridFunction(const LatticeGrid& g, Eigen::VectorXcd v)
      : grid(g), values(std::move(v)) {
    if (values.size() != grid.total_sites())
      throw std::invalid_argument("GridFunction: size mismatch with grid");
  }

  double volume_element() const { return std::pow(grid.h(), grid.d); }
  double norm_l2() const {
    return std::sqrt(volume_element()) * values.norm();
  }
  double norm_l1() const {
    return volume_element() * values.cwiseAbs().sum();
  }
  std::complex<double> inner(const GridFunction& g) const {
    return volume_element() * values.dot(g.values);  // conjugates *this
  }
  GridFunction abs() const {
    GridFunction r(grid);
    r.values = values.cwiseAbs().cast<std::complex<double>>();
    return r;
  }
};

}  // namespace relop
