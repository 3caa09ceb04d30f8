#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "osgs/assembly.hpp"
#include "osgs/fe_space.hpp"
#include "osgs/mesh.hpp"
#include "osgs/problem.hpp"
#include "osgs/solver.hpp"

namespace osgs {

/// Nodal solution of one stabilized solve: the FE field and the projection
/// of its residual. Dirichlet nodes carry prescribed values in u and zero
/// in xi (the projection space vanishes on the constrained boundary).
struct SolutionField {
  EquationKind kind = EquationKind::Primal;
  Eigen::VectorXd u;
  Eigen::VectorXd xi;
  SolveReport solve;  // solver statistics; the raw vector is not kept
};

/// Strong residual at the quadrature points of one element:
/// primal f - (a.grad u_h + s u_h), dual q + a.grad z_h - s z_h
/// (second derivatives vanish on degree-1 elements).
std::vector<double> residual_at_qp(const Mesh& mesh, const ProblemSpec& problem,
                                   const SolutionField& solution, int element,
                                   int points_per_direction);

/// Residual minus the interpolated projection xi: the component orthogonal
/// to the FE space.
std::vector<double> orthogonal_residual_at_qp(const Mesh& mesh, const ProblemSpec& problem,
                                              const SolutionField& solution, int element,
                                              int points_per_direction);

/// Q(u_h) = sum_K int_K q u_h.
double qoi_value(const Mesh& mesh, const ProblemSpec& problem, const Eigen::VectorXd& u,
                 int points_per_direction);

struct EstimatorField {
  std::vector<double> per_element;
  double total = 0.0;  // sum in element order
};

/// Explicit estimator: eta1_K = <q, tau Pperp(R u_h)>_K. Signed.
EstimatorField eta1_field(const Mesh& mesh, const ProblemSpec& problem,
                          const SolutionField& primal, const StabilizationConstants& constants,
                          const AssemblyOptions& options);

/// Implicit duality estimator:
/// eta2_K = <tau Pperp(R* z_h), R u_h>_K + <L* z_h, tau Pperp(R u_h)>_K. Signed.
EstimatorField eta2_field(const Mesh& mesh, const ProblemSpec& problem,
                          const SolutionField& primal, const SolutionField& dual,
                          const StabilizationConstants& constants, const AssemblyOptions& options);

/// |reference - computed| / |eta|; +inf when eta == 0 and the error is not.
double effectivity(double reference_qoi, double qoi_uh, double eta);

struct EstimatorReport {
  std::vector<double> eta1_K;
  std::vector<double> eta2_K;
  std::vector<double> tau_K;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double qoi_uh = 0.0;
  double reference_qoi = 0.0;
  std::string reference_provenance;
  double ieff1 = 0.0;
  double ieff2 = 0.0;
  bool ieff1_degenerate = false;  // eta1 == 0 with a nonzero error
  bool ieff2_degenerate = false;
  bool eta1_sign_disagrees = false;  // sign(eta1) != sign(reference - qoi_uh)
  bool eta2_sign_disagrees = false;
};

EstimatorReport make_report(const Mesh& mesh, const ProblemSpec& problem,
                            const SolutionField& primal, const SolutionField& dual,
                            const StabilizationConstants& constants,
                            const AssemblyOptions& options, double reference_qoi,
                            const std::string& reference_provenance);

}  // namespace osgs
