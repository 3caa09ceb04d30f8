#include "osgs/assembly.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace osgs {

namespace {

double norm2(const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); }

double element_h(const Mesh& mesh, int e, HDefinition def) {
  return def == HDefinition::Diameter ? mesh.h_diameter[e] : mesh.h_edge[e];
}

// Characteristic velocity: max |a| over the matrix-rule quadrature points.
double one_element_tau(const Mesh& mesh, int e, const std::vector<MappedPoint>& pts,
                       const ProblemSpec& problem, const StabilizationConstants& constants,
                       HDefinition h_def) {
  double a_norm = 0.0;
  for (const auto& p : pts) a_norm = std::max(a_norm, norm2(problem.coeff.a(p.x, p.y)));
  return eval_tau(problem.coeff.k, a_norm, problem.coeff.s, element_h(mesh, e, h_def),
                  constants);
}

DirichletSpec homogeneous_like(const DirichletSpec& spec) {
  DirichletSpec dual = spec;
  for (auto& side : dual.side)
    if (side) side = [](double, double) { return 0.0; };
  return dual;
}

struct ChunkBuffers {
  std::vector<Eigen::Triplet<double>> K, P, D, M;
  // right-hand contributions kept per scatter so the chunk merge reproduces
  // the serial accumulation order bit for bit
  std::vector<std::pair<int, double>> F_tau, F;
  std::vector<double> tau;
};

void assemble_range(const Mesh& mesh, const ProblemSpec& problem, EquationKind kind,
                    const StabilizationConstants& constants, const AssemblyOptions& options,
                    const DofMap& dofmap, int data_quad, int begin, int end,
                    ChunkBuffers& out) {
  const double sgn = (kind == EquationKind::Primal) ? 1.0 : -1.0;
  const ScalarField& force = (kind == EquationKind::Primal) ? problem.coeff.f : problem.qoi.q;
  const double k = problem.coeff.k;
  const double s = problem.coeff.s;
  const int nn = mesh.nodes_per_element;

  const auto ref_mat = ReferenceElement::create(mesh.dim, quadrature_rule(mesh.dim, options.matrix_quadrature));
  const bool separate_data = data_quad != options.matrix_quadrature;
  const auto ref_data =
      separate_data ? ReferenceElement::create(mesh.dim, quadrature_rule(mesh.dim, data_quad)) : ref_mat;

  out.tau.assign(end - begin, 0.0);

  std::vector<MappedPoint> pts, pts_data;
  double Ke[4][4], Pe[4][4], De[4][4], Me[4][4];
  double Fte[4], Fe[4];

  for (int e = begin; e < end; ++e) {
    map_to_physical(mesh, e, ref_mat, pts);
    const double tau =
        one_element_tau(mesh, e, pts, problem, constants, options.h_definition);
    out.tau[e - begin] = tau;

    for (int i = 0; i < nn; ++i) {
      Fte[i] = Fe[i] = 0.0;
      for (int j = 0; j < nn; ++j) Ke[i][j] = Pe[i][j] = De[i][j] = Me[i][j] = 0.0;
    }

    for (const auto& p : pts) {
      auto a = problem.coeff.a(p.x, p.y);
      a[0] *= sgn;
      a[1] *= sgn;
      double adN[4], Lop[4], Ladj[4];
      for (int i = 0; i < nn; ++i) {
        adN[i] = a[0] * p.grad[i][0] + a[1] * p.grad[i][1];
        Lop[i] = adN[i] + s * p.N[i];    // first-order part of the operator
        Ladj[i] = -adN[i] + s * p.N[i];  // and of its adjoint
      }
      for (int i = 0; i < nn; ++i) {
        for (int j = 0; j < nn; ++j) {
          const double diff = p.grad[i][0] * p.grad[j][0] + p.grad[i][1] * p.grad[j][1];
          const double galerkin = k * diff + adN[j] * p.N[i] + s * p.N[j] * p.N[i];
          Ke[i][j] += p.weight * (galerkin - tau * Ladj[i] * Lop[j]);
          Pe[i][j] += p.weight * tau * p.N[j] * Ladj[i];
          De[i][j] += p.weight * Lop[j] * p.N[i];
          Me[i][j] += p.weight * p.N[j] * p.N[i];
        }
      }
    }

    if (separate_data) {
      map_to_physical(mesh, e, ref_data, pts_data);
    }
    for (const auto& p : separate_data ? pts_data : pts) {
      const double fv = force(p.x, p.y);
      auto a = problem.coeff.a(p.x, p.y);
      a[0] *= sgn;
      a[1] *= sgn;
      for (int i = 0; i < nn; ++i) {
        const double adN = a[0] * p.grad[i][0] + a[1] * p.grad[i][1];
        const double Ladj = -adN + s * p.N[i];
        Fte[i] += p.weight * fv * (p.N[i] - tau * Ladj);
        Fe[i] += p.weight * fv * p.N[i];
      }
    }

    const auto& conn = mesh.elements[e];
    for (int i = 0; i < nn; ++i) {
      const int ri = dofmap.equation[conn[i]];
      if (ri < 0) continue;
      for (int j = 0; j < nn; ++j) {
        const int rj = dofmap.equation[conn[j]];
        if (rj >= 0) {
          out.K.emplace_back(ri, rj, Ke[i][j]);
          out.P.emplace_back(ri, rj, Pe[i][j]);
          out.D.emplace_back(ri, rj, De[i][j]);
          out.M.emplace_back(ri, rj, Me[i][j]);
        } else {
          const double value = dofmap.value[conn[j]];
          out.F_tau.emplace_back(ri, -Ke[i][j] * value);
          out.F.emplace_back(ri, -De[i][j] * value);
        }
      }
      out.F_tau.emplace_back(ri, Fte[i]);
      out.F.emplace_back(ri, Fe[i]);
    }
  }
}

}  // namespace

std::vector<double> element_tau(const Mesh& mesh, const ProblemSpec& problem,
                                const StabilizationConstants& constants,
                                const AssemblyOptions& options) {
  const auto ref = ReferenceElement::create(mesh.dim, quadrature_rule(mesh.dim, options.matrix_quadrature));
  std::vector<double> tau(mesh.n_elements());
  std::vector<MappedPoint> pts;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    map_to_physical(mesh, e, ref, pts);
    tau[e] = one_element_tau(mesh, e, pts, problem, constants, options.h_definition);
  }
  return tau;
}

BlockSystem assemble_system(const Mesh& mesh, const ProblemSpec& problem, EquationKind kind,
                            const StabilizationConstants& constants,
                            const AssemblyOptions& options) {
  BlockSystem system;
  system.kind = kind;
  const DirichletSpec spec = (kind == EquationKind::Primal)
                                 ? problem.dirichlet
                                 : homogeneous_like(problem.dirichlet);
  system.dofmap = build_dofmap(mesh, spec);
  const int nf = system.dofmap.n_free;
  const int data_quad =
      options.data_quadrature > 0 ? options.data_quadrature : problem.data_quadrature;

  const int n_chunks = std::max(1, std::min(options.threads, mesh.n_elements()));
  std::vector<ChunkBuffers> buffers(n_chunks);
  std::vector<std::thread> workers;
  const int per_chunk = (mesh.n_elements() + n_chunks - 1) / n_chunks;
  for (int c = 0; c < n_chunks; ++c) {
    const int begin = c * per_chunk;
    const int end = std::min(mesh.n_elements(), begin + per_chunk);
    auto task = [&, begin, end, c] {
      assemble_range(mesh, problem, kind, constants, options, system.dofmap, data_quad, begin,
                     end, buffers[c]);
    };
    if (n_chunks == 1)
      task();
    else
      workers.emplace_back(task);
  }
  for (auto& w : workers) w.join();

  // Deterministic merge in chunk order.
  std::vector<Eigen::Triplet<double>> tK, tP, tD, tM;
  system.F_tau = Eigen::VectorXd::Zero(nf);
  system.F = Eigen::VectorXd::Zero(nf);
  system.tau.clear();
  for (const auto& buf : buffers) {
    tK.insert(tK.end(), buf.K.begin(), buf.K.end());
    tP.insert(tP.end(), buf.P.begin(), buf.P.end());
    tD.insert(tD.end(), buf.D.begin(), buf.D.end());
    tM.insert(tM.end(), buf.M.begin(), buf.M.end());
    for (const auto& [row, value] : buf.F_tau) system.F_tau[row] += value;
    for (const auto& [row, value] : buf.F) system.F[row] += value;
    system.tau.insert(system.tau.end(), buf.tau.begin(), buf.tau.end());
  }
  system.K.resize(nf, nf);
  system.P.resize(nf, nf);
  system.D.resize(nf, nf);
  system.M.resize(nf, nf);
  system.K.setFromTriplets(tK.begin(), tK.end());
  system.P.setFromTriplets(tP.begin(), tP.end());
  system.D.setFromTriplets(tD.begin(), tD.end());
  system.M.setFromTriplets(tM.begin(), tM.end());
  return system;
}

Eigen::SparseMatrix<double> monolithic_matrix(const BlockSystem& system) {
  const int nf = system.n_free();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(system.K.nonZeros() + system.P.nonZeros() + system.D.nonZeros() +
                   system.M.nonZeros());
  auto add_block = [&](const Eigen::SparseMatrix<double>& block, int row0, int col0,
                       double scale) {
    for (int outer = 0; outer < block.outerSize(); ++outer)
      for (Eigen::SparseMatrix<double>::InnerIterator it(block, outer); it; ++it)
        triplets.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
  };
  add_block(system.K, 0, 0, 1.0);
  add_block(system.P, 0, nf, -1.0);
  add_block(system.D, nf, 0, 1.0);
  add_block(system.M, nf, nf, 1.0);
  Eigen::SparseMatrix<double> A(2 * nf, 2 * nf);
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

Eigen::VectorXd monolithic_rhs(const BlockSystem& system) {
  const int nf = system.n_free();
  Eigen::VectorXd rhs(2 * nf);
  rhs.head(nf) = system.F_tau;
  rhs.tail(nf) = system.F;
  return rhs;
}

CondensedSystem condense_lumped(const BlockSystem& system) {
  const int nf = system.n_free();
  CondensedSystem out;
  out.lumped_mass = system.M * Eigen::VectorXd::Ones(nf);
  for (int i = 0; i < nf; ++i)
    if (out.lumped_mass[i] == 0.0)
      throw std::runtime_error("singular lumped mass at equation " + std::to_string(i));
  const auto inv = out.lumped_mass.cwiseInverse();
  Eigen::SparseMatrix<double> MinvD = inv.asDiagonal() * system.D;
  out.A = system.K + Eigen::SparseMatrix<double>(system.P * MinvD);
  out.b = system.F_tau + system.P * (inv.asDiagonal() * system.F);
  return out;
}

Eigen::VectorXd CondensedSystem::recover_xi(const BlockSystem& system,
                                            const Eigen::VectorXd& u) const {
  return lumped_mass.cwiseInverse().asDiagonal() * (system.F - system.D * u);
}

void dump_matrix_coordinate(const Eigen::SparseMatrix<double>& matrix, std::ostream& out) {
  char line[96];
  for (int outer = 0; outer < matrix.outerSize(); ++outer)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, outer); it; ++it) {
      std::snprintf(line, sizeof(line), "%ld %ld %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      out << line;
    }
}

}  // namespace osgs
