#include "pcrfle/spectral.hpp"

#include "pcrfle/errors.hpp"
#include "pcrfle/kernels/parallel.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace pcrfle {

LaplacianOperator::LaplacianOperator(NeighborGraph graph) : graph_(std::move(graph)) {
  const double n = static_cast<double>(graph_.size());
  scale_ = 1.0 / (n * std::pow(graph_.epsilon(), static_cast<double>(graph_.dim()) + 2.0));
}

LaplacianOperator laplacian(NeighborGraph graph) { return LaplacianOperator(std::move(graph)); }

void LaplacianOperator::apply(std::span<const double> u, std::span<double> y) const {
  if (u.size() != size() || y.size() != size())
    throw InvalidInput("vector length does not match the Laplacian size");
  const auto &deg = graph_.degree();
  kernels::omp::laplacian_apply(graph_.csr(), {deg.data(), size()}, scale_, u, y);
}

Eigen::VectorXd LaplacianOperator::apply(const Eigen::VectorXd &u) const {
  Eigen::VectorXd y(u.size());
  apply(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())),
        std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

Eigen::SparseMatrix<double> LaplacianOperator::sparse() const {
  const auto &w = graph_.weights();
  const auto &deg = graph_.degree();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(w.nonZeros() + w.rows()));
  for (Eigen::Index i = 0; i < w.outerSize(); ++i) {
    trip.emplace_back(i, i, scale_ * deg(i));
    for (SparseRowMatrix::InnerIterator it(w, i); it; ++it)
      trip.emplace_back(i, it.col(), -scale_ * it.value());
  }
  Eigen::SparseMatrix<double> l(w.rows(), w.cols());
  l.setFromTriplets(trip.begin(), trip.end());
  return l;
}

Eigen::MatrixXd LaplacianOperator::dense() const { return Eigen::MatrixXd(sparse()); }

double LaplacianOperator::norm_bound() const {
  return graph_.size() == 0 ? 0.0 : 2.0 * scale_ * graph_.degree().maxCoeff();
}

double dirichlet_form(const LaplacianOperator &op, const Eigen::VectorXd &u) {
  if (static_cast<std::size_t>(u.size()) != op.size())
    throw InvalidInput("vector length does not match the Laplacian size");
  const auto &w = op.graph().weights();
  double total = 0.0;
  for (Eigen::Index i = 0; i < w.outerSize(); ++i)
    for (SparseRowMatrix::InnerIterator it(w, i); it; ++it) {
      const double diff = u(i) - u(it.col());
      total += it.value() * diff * diff;
    }
  const double n = static_cast<double>(op.size());
  // scale = 1 / (n eps^(d+2)), so the prefactor is scale / (2n).
  return op.scale() * total / (2.0 * n);
}

Eigen::VectorXd EigenSystem::coefficients(const Eigen::VectorXd &u) const {
  if (static_cast<std::size_t>(u.size()) != size())
    throw InvalidInput("vector length does not match the eigensystem size");
  return vectors.transpose() * u / static_cast<double>(size());
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  if (v.size() == 0)
    return;
  const double peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak * (1.0 - 1e-9)) {
      if (v(i) < 0.0)
        v = -v;
      return;
    }
  }
}

namespace {

struct LocalPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors; // unit 2-norm columns
  double worst_residual = 0.0;
};

LocalPairs dense_pairs(const Eigen::MatrixXd &a, std::size_t want) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw SolverError("dense symmetric eigensolver failed", std::numeric_limits<double>::infinity());
  const auto k = static_cast<Eigen::Index>(want);
  return {solver.eigenvalues().head(k), solver.eigenvectors().leftCols(k), 0.0};
}

/// Orthogonalizes the columns of `block` against basis.leftCols(used) and
/// among themselves (classical Gram-Schmidt, repeated while cancellation is
/// heavy). Columns that collapse are replaced by fresh random directions.
void orthonormalize_block(const Eigen::MatrixXd &basis, Eigen::Index used, Eigen::MatrixXd &block,
                          std::mt19937_64 &rng) {
  std::normal_distribution<double> normal;
  const auto prior = basis.leftCols(used);
  if (used > 0)
    for (int pass = 0; pass < 2; ++pass)
      block -= prior * (prior.transpose() * block);
  for (Eigen::Index c = 0; c < block.cols(); ++c) {
    auto col = block.col(c);
    double reference = col.norm();
    for (int attempt = 0;; ++attempt) {
      double before = reference;
      for (int pass = 0; pass < 4; ++pass) {
        if (c > 0)
          col -= block.leftCols(c) * (block.leftCols(c).transpose() * col);
        if (used > 0 && (pass > 0 || attempt > 0))
          col -= prior * (prior.transpose() * col);
        const double now = col.norm();
        if (now > 0.5 * before)
          break;
        before = now;
      }
      const double after = col.norm();
      if (after > 1e-10 * reference && after > 0.0) {
        col /= after;
        break;
      }
      if (attempt > 8)
        throw SolverError("could not extend the Krylov basis", std::numeric_limits<double>::infinity());
      for (Eigen::Index r = 0; r < col.size(); ++r)
        col(r) = normal(rng);
      reference = col.norm();
    }
  }
}

/// Smallest `want` eigenpairs of a connected component Laplacian. Block
/// Krylov-Schur on T = (L + delta I)^{-1} with full reorthogonalization;
/// restarts keep the leading Ritz vectors of T plus the next Krylov block.
/// Final pairs come from a Rayleigh-Ritz projection of L onto the kept Ritz
/// vectors, and convergence is judged by the true residual |L y - lambda y|.
LocalPairs lanczos_pairs(const Eigen::SparseMatrix<double> &lap, std::size_t want,
                         const EigenOptions &opt, double norm_bound) {
  const Eigen::Index n = lap.rows();
  const auto k_want = static_cast<Eigen::Index>(want);
  const Eigen::Index block = std::max<Eigen::Index>(1, std::min<Eigen::Index>(
                                                          static_cast<Eigen::Index>(opt.block_size), n - 1));
  const double target =
      std::max(opt.tolerance, 64.0 * std::numeric_limits<double>::epsilon() * norm_bound);
  const Eigen::Index cap = std::min(n, std::max<Eigen::Index>(2 * k_want + 4 * block, k_want + 80));
  const Eigen::Index keep = std::min(cap - block, k_want + block);

  const double delta = std::max(1e-6 * norm_bound, std::numeric_limits<double>::min());
  Eigen::SparseMatrix<double> shifted = lap;
  for (Eigen::Index i = 0; i < n; ++i)
    shifted.coeffRef(i, i) += delta;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
  if (factor.info() != Eigen::Success)
    throw SolverError("factorization of the shifted Laplacian failed",
                      std::numeric_limits<double>::infinity());

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;

  Eigen::MatrixXd q(n, cap);   // orthonormal basis
  Eigen::MatrixXd tq(n, cap);  // T applied to the basis
  Eigen::MatrixXd h(cap, cap); // q^T T q
  Eigen::Index used = 0;
  Eigen::Index last_start = 0;

  auto append = [&](Eigen::MatrixXd blk) {
    orthonormalize_block(q, used, blk, rng);
    const Eigen::Index b = blk.cols();
    q.middleCols(used, b) = blk;
    tq.middleCols(used, b) = factor.solve(blk);
    h.block(0, used, used + b, b) = q.leftCols(used + b).transpose() * tq.middleCols(used, b);
    h.block(used, 0, b, used) = h.block(0, used, used, b).transpose();
    last_start = used;
    used += b;
  };

  // The constant vector spans the kernel of a connected component Laplacian.
  append(Eigen::MatrixXd::Constant(n, 1, 1.0));
  {
    Eigen::MatrixXd start(n, std::min(block, n - used));
    for (Eigen::Index i = 0; i < start.size(); ++i)
      start.data()[i] = normal(rng);
    append(std::move(start));
  }

  double worst = std::numeric_limits<double>::infinity();
  std::size_t restarts = 0;

  while (true) {
    const bool full = used + block > cap;
    if (used == n || full) {
      const Eigen::Index m = used;
      Eigen::MatrixXd hm = h.topLeftCorner(m, m);
      hm = 0.5 * (hm + hm.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(hm);
      if (small.info() != Eigen::Success)
        throw SolverError("Rayleigh-Ritz projection failed", worst);
      // Largest values of T first.
      const Eigen::MatrixXd s = small.eigenvectors().rowwise().reverse();
      const Eigen::VectorXd mu = small.eigenvalues().reverse();
      const Eigen::Index k = std::min(k_want, m);

      // Rayleigh-Ritz with L on the leading Ritz vectors of T.
      const Eigen::Index span = used == n ? m : std::min(m, k + block);
      const Eigen::MatrixXd z = q.leftCols(m) * s.leftCols(span);
      const Eigen::MatrixXd lz = lap * z;
      Eigen::MatrixXd g = z.transpose() * lz;
      g = 0.5 * (g + g.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> proj(g);
      if (proj.info() != Eigen::Success)
        throw SolverError("Rayleigh-Ritz projection failed", worst);
      Eigen::MatrixXd y = z * proj.eigenvectors().leftCols(k);
      const Eigen::MatrixXd ly = lz * proj.eigenvectors().leftCols(k);
      const Eigen::VectorXd theta = proj.eigenvalues().head(k);
      worst = 0.0;
      for (Eigen::Index c = 0; c < k; ++c)
        worst = std::max(worst, (ly.col(c) - theta(c) * y.col(c)).norm());
      if ((k == k_want && worst <= target) || used == n) {
        if (worst > target && used < n)
          throw SolverError("Lanczos did not converge", worst);
        for (Eigen::Index c = 0; c < k; ++c)
          y.col(c).normalize();
        return {theta, y, worst};
      }
      (void)mu;

      if (full) {
        if (++restarts > opt.max_restarts)
          throw SolverError("Lanczos exceeded its restart budget", worst);
        // Next Krylov block, orthogonal to the whole current basis. Near
        // n the complement can be narrower than the last block.
        Eigen::MatrixXd next = tq.middleCols(last_start, std::min(used - last_start, n - used));
        orthonormalize_block(q, used, next, rng);
        const Eigen::Index kept = std::min(m, keep);
        const Eigen::MatrixXd yk = q.leftCols(m) * s.leftCols(kept);
        const Eigen::MatrixXd tyk = tq.leftCols(m) * s.leftCols(kept);
        q.leftCols(kept) = yk;
        tq.leftCols(kept) = tyk;
        h.topLeftCorner(kept, kept) = mu.head(kept).asDiagonal();
        used = kept;
        append(std::move(next));
      }
      continue;
    }

    const Eigen::Index b = std::min<Eigen::Index>(used - last_start, n - used);
    if (b <= 0)
      throw SolverError("Lanczos basis exhausted", worst);
    append(Eigen::MatrixXd(tq.middleCols(last_start, b)));
  }
}

EigenSystem assemble(std::size_t n, std::vector<double> &&vals,
                     std::vector<Eigen::VectorXd> &&vecs, EigenMethod method) {
  EigenSystem eig;
  eig.method = method;
  const auto m = static_cast<Eigen::Index>(vals.size());
  eig.values.resize(m);
  eig.vectors.resize(static_cast<Eigen::Index>(n), m);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (Eigen::Index c = 0; c < m; ++c) {
    eig.values(c) = vals[static_cast<std::size_t>(c)];
    eig.vectors.col(c) = vecs[static_cast<std::size_t>(c)].normalized() * root_n;
    fix_sign(eig.vectors.col(c));
  }
  return eig;
}

EigenSystem solve_dense(const LaplacianOperator &op, std::size_t m) {
  const auto pairs = dense_pairs(op.dense(), m);
  std::vector<double> vals(pairs.values.data(), pairs.values.data() + pairs.values.size());
  std::vector<Eigen::VectorXd> vecs;
  for (Eigen::Index c = 0; c < pairs.vectors.cols(); ++c)
    vecs.emplace_back(pairs.vectors.col(c));
  return assemble(op.size(), std::move(vals), std::move(vecs), EigenMethod::dense);
}

EigenSystem solve_iterative(const LaplacianOperator &op, std::size_t m, const EigenOptions &opt) {
  const std::size_t n = op.size();
  const auto conn = connectivity_check(op.graph());
  std::vector<std::vector<int>> members(conn.component_count);
  for (std::size_t v = 0; v < n; ++v)
    members[conn.labels[v]].push_back(static_cast<int>(v));

  const Eigen::SparseMatrix<double> full = op.sparse();
  const double bound = op.norm_bound();

  struct Candidate {
    double value;
    std::size_t component;
    Eigen::Index column;
  };
  std::vector<Candidate> candidates;
  std::vector<LocalPairs> local(conn.component_count);
  double worst = 0.0;

  for (std::size_t c = 0; c < conn.component_count; ++c) {
    const auto &idx = members[c];
    const auto nc = static_cast<Eigen::Index>(idx.size());
    const std::size_t want = std::min(m, idx.size());
    if (nc == 1) {
      local[c] = {Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1), 0.0};
    } else {
      // Component-restricted Laplacian; components are closed under W.
      std::vector<int> position(n, -1);
      for (Eigen::Index i = 0; i < nc; ++i)
        position[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = static_cast<int>(i);
      std::vector<Eigen::Triplet<double>> trip;
      for (Eigen::Index i = 0; i < nc; ++i) {
        const int col = idx[static_cast<std::size_t>(i)];
        for (Eigen::SparseMatrix<double>::InnerIterator it(full, col); it; ++it)
          trip.emplace_back(position[static_cast<std::size_t>(it.row())], static_cast<int>(i), it.value());
      }
      Eigen::SparseMatrix<double> sub(nc, nc);
      sub.setFromTriplets(trip.begin(), trip.end());
      local[c] = idx.size() <= opt.dense_component_limit
                     ? dense_pairs(Eigen::MatrixXd(sub), want)
                     : lanczos_pairs(sub, want, opt, bound);
    }
    worst = std::max(worst, local[c].worst_residual);
    for (Eigen::Index k = 0; k < local[c].values.size(); ++k)
      candidates.push_back({local[c].values(k), c, k});
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate &a, const Candidate &b) { return a.value < b.value; });
  candidates.resize(std::min(m, candidates.size()));

  std::vector<double> vals;
  std::vector<Eigen::VectorXd> vecs;
  for (const auto &cand : candidates) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    const auto &idx = members[cand.component];
    const auto &vec = local[cand.component].vectors;
    for (std::size_t i = 0; i < idx.size(); ++i)
      v(idx[i]) = vec(static_cast<Eigen::Index>(i), cand.column);
    vals.push_back(cand.value);
    vecs.push_back(std::move(v));
  }
  auto eig = assemble(n, std::move(vals), std::move(vecs), EigenMethod::iterative);
  eig.max_residual = worst;
  return eig;
}

double measured_residual(const LaplacianOperator &op, const EigenSystem &eig) {
  double worst = 0.0;
  const double root_n = std::sqrt(static_cast<double>(eig.size()));
  for (Eigen::Index c = 0; c < eig.vectors.cols(); ++c) {
    const Eigen::VectorXd v = eig.vectors.col(c);
    worst = std::max(worst, (op.apply(v) - eig.values(c) * v).norm() / root_n);
  }
  return worst;
}

} // namespace

EigenSystem eigensolve(const LaplacianOperator &op, std::size_t m, const EigenOptions &options) {
  const std::size_t n = op.size();
  if (m < 1 || m > n)
    throw InvalidInput("eigenpair count m=" + std::to_string(m) + " must lie in [1, " +
                       std::to_string(n) + "]");
  EigenMethod method = options.method;
  if (method == EigenMethod::automatic)
    method = (n <= dense_solver_limit || 2 * m >= n) ? EigenMethod::dense : EigenMethod::iterative;

  EigenSystem eig = method == EigenMethod::dense ? solve_dense(op, m) : solve_iterative(op, m, options);
  eig.max_residual = measured_residual(op, eig);
  return eig;
}

Eigen::VectorXd fractional_apply(const EigenSystem &eig, double s, const Eigen::VectorXd &u) {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidInput("s must lie in (0,1)");
  const Eigen::VectorXd coef = eig.coefficients(u);
  if (!eig.complete()) {
    const Eigen::VectorXd inside = eig.vectors * coef;
    const double rest = std::sqrt(norm_n_sq(u - inside));
    if (rest > 1e-8 * std::max(1.0, std::sqrt(norm_n_sq(u))))
      throw InvalidInput("vector is not inside the span of the computed eigenvectors");
  }
  Eigen::VectorXd scaled(coef.size());
  for (Eigen::Index k = 0; k < coef.size(); ++k) {
    double lambda = eig.values(k);
    if (lambda < -1e-10)
      throw InvalidInput("eigenvalue " + std::to_string(lambda) + " is negative beyond round-off");
    lambda = std::max(lambda, 0.0);
    scaled(k) = std::pow(lambda, s) * coef(k);
  }
  return eig.vectors * scaled;
}

} // namespace pcrfle
