#pragma once

#include <Eigen/SparseCore>
#include <iosfwd>
#include <vector>

#include "osgs/fe_space.hpp"
#include "osgs/mesh.hpp"
#include "osgs/problem.hpp"

namespace osgs {

enum class EquationKind { Primal, Dual };
enum class HDefinition { Diameter, Edge };

struct AssemblyOptions {
  int matrix_quadrature = 2;         // pts/dir for all matrix terms
  int data_quadrature = 0;           // pts/dir for f/q integrals; 0 = problem default
  HDefinition h_definition = HDefinition::Diameter;
  int threads = 1;
};

/// Coupled system of the stabilized formulation, FE unknowns u plus the
/// residual-projection unknowns xi, both over the free nodes:
///
///   [ K  -P ] [ u  ]   [ F_tau ]
///   [ D   M ] [ xi ] = [ F     ]
///
/// Row 1: Galerkin terms minus the tau-weighted stabilization couplings;
/// row 2: the L2 projection of the residual onto the FE space. Dirichlet
/// columns are eliminated into both right-hand sides.
struct BlockSystem {
  EquationKind kind = EquationKind::Primal;
  DofMap dofmap;
  Eigen::SparseMatrix<double> K;
  Eigen::SparseMatrix<double> P;
  Eigen::SparseMatrix<double> D;
  Eigen::SparseMatrix<double> M;
  Eigen::VectorXd F_tau;
  Eigen::VectorXd F;
  std::vector<double> tau;  // per element

  int n_free() const { return dofmap.n_free; }
};

BlockSystem assemble_system(const Mesh& mesh, const ProblemSpec& problem,
                            EquationKind kind, const StabilizationConstants& constants,
                            const AssemblyOptions& options);

inline BlockSystem assemble_primal(const Mesh& mesh, const ProblemSpec& problem,
                                   const StabilizationConstants& constants = {},
                                   const AssemblyOptions& options = {}) {
  return assemble_system(mesh, problem, EquationKind::Primal, constants, options);
}
inline BlockSystem assemble_dual(const Mesh& mesh, const ProblemSpec& problem,
                                 const StabilizationConstants& constants = {},
                                 const AssemblyOptions& options = {}) {
  return assemble_system(mesh, problem, EquationKind::Dual, constants, options);
}

/// Stabilization parameter per element, shared by assembly and the error
/// estimators (identical h and |a| evaluation).
std::vector<double> element_tau(const Mesh& mesh, const ProblemSpec& problem,
                                const StabilizationConstants& constants,
                                const AssemblyOptions& options);

Eigen::SparseMatrix<double> monolithic_matrix(const BlockSystem& system);
Eigen::VectorXd monolithic_rhs(const BlockSystem& system);

/// Single-field system after eliminating xi with a row-sum lumped mass:
/// A = K + P Ml^{-1} D, b = F_tau + P Ml^{-1} F.
struct CondensedSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  Eigen::VectorXd lumped_mass;

  /// Recovers xi = Ml^{-1} (F - D u) after the reduced solve.
  Eigen::VectorXd recover_xi(const BlockSystem& system, const Eigen::VectorXd& u) const;
};

/// Throws std::runtime_error when a lumped-mass entry is zero.
CondensedSystem condense_lumped(const BlockSystem& system);

/// Plain-text coordinate dump (row col value), for debugging.
void dump_matrix_coordinate(const Eigen::SparseMatrix<double>& matrix, std::ostream& out);

}  // namespace osgs
