// SPDX-License-Identifier: Apache-2.0

#include "plap/linear_solver.hpp"

#include <cmath>

#include <Eigen/SparseCholesky>

#include "plap/error.hpp"

namespace plap
{

namespace
{

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

class DirectSolver final : public SpdSolver
{
public:
  void factor(const SparseMatrix &a) override
  {
    a_ = a;
    if (!analyzed_)
    {
      llt_.analyzePattern(a_);
      analyzed_ = true;
    }
    llt_.factorize(a_);
    if (llt_.info() != Eigen::Success)
    {
      throw Error("sparse Cholesky factorization failed");
    }
  }
  void solve(const Vector &b, Vector &x) override { x = llt_.solve(b); }
  std::string name() const override { return "direct"; }
  int last_iterations() const override { return 1; }
  void set_tolerance(double) override {}

private:
  ColMatrix a_;
  Eigen::SimplicialLLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
  bool analyzed_ = false;
};

// Cell-centered geometric multigrid on the unknown cells, used as a
// preconditioner for conjugate gradients. Coarse cell of lattice cell c is
// c >> 1 per axis; prolongation is piecewise (bi/tri)linear with weights 3/4
// and 1/4, dropping coarse cells that carry no unknown.
class MultigridSolver final : public SpdSolver
{
public:
  MultigridSolver(const Stencil &st, double rel_tol) : dim_(st.dim()), rel_tol_(rel_tol)
  {
    std::vector<Coord> coords;
    coords.reserve(st.unknown_cells().size());
    for (Index cell : st.unknown_cells())
    {
      coords.push_back(st.grid().coords(cell));
    }
    Coord size = st.grid().size;
    levels_.emplace_back();
    while (coords.size() > kCoarsest && levels_.size() < 16)
    {
      Coord csize = {1, 1, 1};
      for (int d = 0; d < dim_; d++)
      {
        csize[d] = size[d] / 2 + 2;
      }
      const Index ccount = csize[0] * csize[1] * csize[2];
      std::vector<std::int32_t> id(static_cast<std::size_t>(ccount), -1);
      auto lin = [&](const Coord &c) { return c[0] + csize[0] * (c[1] + csize[1] * c[2]); };
      std::vector<Coord> ccoords;
      for (const Coord &c : coords)
      {
        Coord p = {c[0] >> 1, c[1] >> 1, c[2] >> 1};
        auto &slot = id[static_cast<std::size_t>(lin(p))];
        if (slot < 0)
        {
          slot = static_cast<std::int32_t>(ccoords.size());
          ccoords.push_back(p);
        }
      }
      std::vector<Eigen::Triplet<double, int>> trip;
      for (std::size_t i = 0; i < coords.size(); i++)
      {
        const Coord &c = coords[i];
        const int corners = 1 << dim_;
        for (int mask = 0; mask < corners; mask++)
        {
          Coord p = {c[0] >> 1, c[1] >> 1, c[2] >> 1};
          double w = 1.0;
          bool valid = true;
          for (int d = 0; d < dim_; d++)
          {
            if (mask & (1 << d))
            {
              p[d] += (c[d] & 1) ? 1 : -1;
              w *= 0.25;
              valid = valid && p[d] >= 0 && p[d] < csize[d];
            }
            else
            {
              w *= 0.75;
            }
          }
          if (!valid)
          {
            continue;
          }
          const std::int32_t j = id[static_cast<std::size_t>(lin(p))];
          if (j >= 0)
          {
            trip.emplace_back(static_cast<int>(i), j, w);
          }
        }
      }
      Level &fine = levels_.back();
      fine.p.resize(static_cast<int>(coords.size()), static_cast<int>(ccoords.size()));
      fine.p.setFromTriplets(trip.begin(), trip.end());
      fine.pt = fine.p.transpose();
      levels_.emplace_back();
      coords = std::move(ccoords);
      size = csize;
    }
  }

  void factor(const SparseMatrix &a) override
  {
    levels_[0].a = a;
    for (std::size_t l = 0; l + 1 < levels_.size(); l++)
    {
      SparseMatrix ap = levels_[l].a * levels_[l].p;
      levels_[l + 1].a = levels_[l].pt * ap;
    }
    for (auto &level : levels_)
    {
      level.a.makeCompressed();
      level.diag = level.a.diagonal();
      const auto n = level.a.rows();
      level.r.resize(n);
      level.x.resize(n);
      level.b.resize(n);
    }
    coarse_a_ = levels_.back().a;
    if (!coarse_analyzed_)
    {
      coarse_.analyzePattern(coarse_a_);
      coarse_analyzed_ = true;
    }
    coarse_.factorize(coarse_a_);
    if (coarse_.info() != Eigen::Success)
    {
      throw Error("coarse-grid factorization failed");
    }
  }

  void solve(const Vector &b, Vector &x) override
  {
    const SparseMatrix &a = levels_[0].a;
    const auto n = a.rows();
    if (x.size() != n)
    {
      x.setZero(n);
    }
    Vector r = b - a * x;
    const double bnorm = b.norm();
    if (bnorm == 0.0)
    {
      x.setZero();
      iterations_ = 0;
      return;
    }
    Vector z(n), q(n);
    precondition(r, z);
    Vector d = z;
    double rz = r.dot(z);
    iterations_ = 0;
    for (int it = 0; it < kMaxIterations; it++)
    {
      if (r.norm() <= rel_tol_ * bnorm)
      {
        break;
      }
      q.noalias() = a * d;
      const double alpha = rz / d.dot(q);
      x += alpha * d;
      r -= alpha * q;
      precondition(r, z);
      const double rz_new = r.dot(z);
      d = z + (rz_new / rz) * d;
      rz = rz_new;
      iterations_ = it + 1;
    }
  }

  std::string name() const override { return "multigrid-cg"; }
  int last_iterations() const override { return iterations_; }
  void set_tolerance(double rel_tol) override { rel_tol_ = rel_tol; }

private:
  static constexpr std::size_t kCoarsest = 3000;
  static constexpr int kMaxIterations = 500;

  struct Level
  {
    SparseMatrix a;
    SparseMatrix p;   // prolongation from the next coarser level
    SparseMatrix pt;  // restriction
    Vector diag, r, x, b;
  };

  static void gauss_seidel(const Level &lv, Vector &x, const Vector &b, bool forward)
  {
    const SparseMatrix &a = lv.a;
    const int *outer = a.outerIndexPtr();
    const int *inner = a.innerIndexPtr();
    const double *val = a.valuePtr();
    const auto n = static_cast<int>(a.rows());
    for (int k = 0; k < n; k++)
    {
      const int i = forward ? k : n - 1 - k;
      double s = b[i];
      for (int j = outer[i]; j < outer[i + 1]; j++)
      {
        if (inner[j] != i)
        {
          s -= val[j] * x[inner[j]];
        }
      }
      x[i] = s / lv.diag[i];
    }
  }

  void vcycle(std::size_t l)
  {
    Level &lv = levels_[l];
    if (l + 1 == levels_.size())
    {
      lv.x = coarse_.solve(lv.b);
      return;
    }
    lv.x.setZero();
    gauss_seidel(lv, lv.x, lv.b, true);
    lv.r = lv.b - lv.a * lv.x;
    levels_[l + 1].b = lv.pt * lv.r;
    vcycle(l + 1);
    lv.x += lv.p * levels_[l + 1].x;
    gauss_seidel(lv, lv.x, lv.b, false);
  }

  void precondition(const Vector &r, Vector &z)
  {
    levels_[0].b = r;
    vcycle(0);
    z = levels_[0].x;
  }

  int dim_;
  double rel_tol_;
  std::vector<Level> levels_;
  ColMatrix coarse_a_;
  Eigen::SimplicialLLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> coarse_;
  bool coarse_analyzed_ = false;
  int iterations_ = 0;
};

}  // namespace

std::unique_ptr<SpdSolver> make_spd_solver(const Stencil &st, LinearBackend backend, double rel_tol)
{
  if (backend == LinearBackend::Auto)
  {
    backend = (st.dim() <= 2 || st.unknowns() < 4000) ? LinearBackend::Direct : LinearBackend::Multigrid;
  }
  if (backend == LinearBackend::Direct)
  {
    return std::make_unique<DirectSolver>();
  }
  return std::make_unique<MultigridSolver>(st, rel_tol);
}

LinearBackend parse_backend(const std::string &name)
{
  if (name == "auto")
  {
    return LinearBackend::Auto;
  }
  if (name == "direct")
  {
    return LinearBackend::Direct;
  }
  if (name == "multigrid")
  {
    return LinearBackend::Multigrid;
  }
  throw Error("unknown linear backend '" + name + "'");
}

}  // namespace plap
