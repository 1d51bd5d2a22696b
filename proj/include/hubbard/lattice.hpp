#pragma once

// Hopping-coefficient matrices for periodic L x L square lattices and for
// small arbitrary interaction graphs, plus the two-colour plaquette split.
//
// Sites of an L x L lattice are numbered row-major: index = y * L + x.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hubbard/errors.hpp"

namespace hubbard {

using Index = Eigen::Index;

struct LatticeSpec {
  int L = 8;
  double u = 4.0;
  double tau = 1.0;
  bool periodic = true;
};

struct GridSite {
  int x = 0;
  int y = 0;
  friend bool operator==(const GridSite&, const GridSite&) = default;
};

/// Real symmetric, zero-diagonal coefficient matrix R of a single spin
/// sector: H_h = sum_{sigma} sum_{i != j} R_ij a^dag_{i,sigma} a_{j,sigma}.
class HoppingCoefficients {
 public:
  HoppingCoefficients() = default;

  /// `side` is L for square lattices and 0 for arbitrary graphs.
  explicit HoppingCoefficients(Eigen::MatrixXd entries, int side = 0)
      : entries_(std::move(entries)), side_(side) {
    if (entries_.rows() != entries_.cols()) {
      throw ContractViolation("hopping matrix must be square");
    }
    if (side_ > 0 && entries_.rows() != Index(side_) * side_) {
      throw ContractViolation("hopping matrix size does not match L^2");
    }
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    for (Index i = 0; i < entries_.rows(); ++i) {
      if (entries_(i, i) != 0.0) {
        throw ContractViolation("hopping matrix must have zero diagonal");
      }
      for (Index j = i + 1; j < entries_.cols(); ++j) {
        if (std::abs(entries_(i, j) - entries_(j, i)) > 1e-12 * scale) {
          throw ContractViolation("hopping matrix must be symmetric");
        }
      }
    }
  }

  const Eigen::MatrixXd& entries() const { return entries_; }
  Index dim() const { return entries_.rows(); }
  int side() const { return side_; }
  bool is_square_lattice() const { return side_ > 0; }

  Index index(GridSite s) const {
    require_lattice();
    return Index(wrap(s.y)) * side_ + wrap(s.x);
  }

  GridSite site(Index i) const {
    require_lattice();
    return {static_cast<int>(i % side_), static_cast<int>(i / side_)};
  }

  Eigen::SparseMatrix<double> sparse() const { return entries_.sparseView(); }

  /// Undirected edges (i < j) with nonzero coefficient.
  std::vector<std::pair<Index, Index>> edges() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index i = 0; i < dim(); ++i) {
      for (Index j = i + 1; j < dim(); ++j) {
        if (entries_(i, j) != 0.0) out.emplace_back(i, j);
      }
    }
    return out;
  }

 private:
  void require_lattice() const {
    if (side_ <= 0) {
      throw ContractViolation("grid coordinates need a square lattice");
    }
  }
  int wrap(int c) const { return ((c % side_) + side_) % side_; }

  Eigen::MatrixXd entries_;
  int side_ = 0;
};

/// Periodic L x L nearest-neighbour lattice with hopping amplitude tau.
inline HoppingCoefficients build_square_lattice(const LatticeSpec& spec) {
  if (spec.L < 4) {
    throw UnsupportedLattice(
        "L must be at least 4; smaller periodic lattices merge neighbours");
  }
  if (!spec.periodic) {
    throw UnsupportedLattice("only periodic boundary conditions are supported");
  }
  const int L = spec.L;
  const Index n = Index(L) * L;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const Index i = Index(y) * L + x;
      const Index right = Index(y) * L + (x + 1) % L;
      const Index up = Index((y + 1) % L) * L + x;
      R(i, right) = R(right, i) = spec.tau;
      R(i, up) = R(up, i) = spec.tau;
    }
  }
  return HoppingCoefficients(std::move(R), L);
}

/// Arbitrary graph on `n_sites` vertices, every listed edge carrying `tau`.
inline HoppingCoefficients graph_hopping(
    Index n_sites, const std::vector<std::pair<Index, Index>>& edges,
    double tau) {
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n_sites, n_sites);
  for (auto [i, j] : edges) {
    if (i == j || i < 0 || j < 0 || i >= n_sites || j >= n_sites) {
      throw ContractViolation("invalid edge in graph_hopping");
    }
    R(i, j) = R(j, i) = tau;
  }
  return HoppingCoefficients(std::move(R));
}

/// Open-boundary w x h grid (used for the small exact instances).
inline HoppingCoefficients open_grid(int w, int h, double tau) {
  std::vector<std::pair<Index, Index>> edges;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Index i = Index(y) * w + x;
      if (x + 1 < w) edges.emplace_back(i, i + 1);
      if (y + 1 < h) edges.emplace_back(i, i + w);
    }
  }
  return graph_hopping(Index(w) * h, edges, tau);
}

/// Four sites of one plaquette, listed around the cycle starting at the
/// lower-left anchor: (x,y), (x+1,y), (x+1,y+1), (x,y+1).
struct Plaquette {
  std::array<Index, 4> sites{};
};

struct PlaquettePartition {
  HoppingCoefficients pink;
  HoppingCoefficients gold;
  std::vector<Plaquette> pink_plaquettes;
  std::vector<Plaquette> gold_plaquettes;
};

/// Splits the edges of a periodic even-L lattice into pink plaquettes
/// (anchors with both coordinates even) and gold plaquettes (both odd).
inline PlaquettePartition plaquette_partition(const HoppingCoefficients& R) {
  if (!R.is_square_lattice()) {
    throw UnsupportedLattice("plaquette partition needs a square lattice");
  }
  const int L = R.side();
  if (L < 4 || L % 2 != 0) {
    throw UnsupportedLattice("plaquette partition needs even L >= 4, got L = " +
                             std::to_string(L));
  }
  const Index n = R.dim();
  Eigen::MatrixXd pink = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd gold = Eigen::MatrixXd::Zero(n, n);
  PlaquettePartition out;
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      if (x % 2 != y % 2) continue;
      const bool is_pink = (x % 2 == 0);
      Plaquette p;
      p.sites = {R.index({x, y}), R.index({x + 1, y}),
                 R.index({x + 1, y + 1}), R.index({x, y + 1})};
      Eigen::MatrixXd& target = is_pink ? pink : gold;
      for (int k = 0; k < 4; ++k) {
        const Index a = p.sites[k];
        const Index b = p.sites[(k + 1) % 4];
        target(a, b) = R.entries()(a, b);
        target(b, a) = R.entries()(b, a);
      }
      (is_pink ? out.pink_plaquettes : out.gold_plaquettes).push_back(p);
    }
  }
  out.pink = HoppingCoefficients(std::move(pink), L);
  out.gold = HoppingCoefficients(std::move(gold), L);
  return out;
}

/// Coefficients of all hopping terms touching `site`: row and column `site`
/// of R, zero elsewhere. Each edge therefore appears in the star of both of
/// its endpoints, so the stars sum to 2R.
inline HoppingCoefficients star_matrix(const HoppingCoefficients& R,
                                       Index site) {
  if (site < 0 || site >= R.dim()) {
    throw ContractViolation("star_matrix: site out of range");
  }
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(R.dim(), R.dim());
  S.row(site) = R.entries().row(site);
  S.col(site) = R.entries().col(site);
  return HoppingCoefficients(std::move(S));
}

/// tau times the adjacency matrix of a 4-cycle.
inline Eigen::Matrix4d plaquette_subblock(double tau) {
  Eigen::Matrix4d m;
  m << 0, 1, 0, 1,  //
      1, 0, 1, 0,   //
      0, 1, 0, 1,   //
      1, 0, 1, 0;
  return tau * m;
}

/// Dense CSV dump, one matrix row per line.
inline void write_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  const auto old = os.precision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
  os.precision(old);
}

}  // namespace hubbard
