#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "osgs/fe_space.hpp"
#include "osgs/mesh.hpp"

namespace osgs {

using ScalarField = std::function<double(double, double)>;
using VectorField = std::function<std::array<double, 2>(double, double)>;

/// Algorithmic constants of the stabilization parameter, defaults for
/// degree-1 elements.
struct StabilizationConstants {
  double c1 = 4.0;
  double c2 = 2.0;
  double c3 = 1.0;
};

struct Coefficients {
  double k = 1.0;   // diffusion, > 0
  double s = 0.0;   // reaction, >= 0
  VectorField a;    // advection velocity, divergence-free
  ScalarField f;    // forcing
};

struct QoiSpec {
  ScalarField q;  // representative of the linear functional
  std::string description;
};

enum class DomainKind { Interval, Square, LShape };

/// Reference value source for effectivity studies: an analytic solution
/// when available, otherwise a fine-mesh recipe.
struct ReferenceSolution {
  ScalarField exact;     // empty when unknown
  int fine_mesh_n = 0;   // mesh parameter of the reference solve

  bool has_exact() const { return static_cast<bool>(exact); }
};

struct ProblemSpec {
  std::string name;
  DomainKind domain = DomainKind::Interval;
  Coefficients coeff;
  QoiSpec qoi;
  DirichletSpec dirichlet;
  ReferenceSolution reference;
  int data_quadrature = 2;        // pts/dir for forcing and QoI integrals
  int mesh_divisor = 1;           // mesh n must be a multiple of this
  std::vector<int> default_sizes; // convergence-study mesh parameters
  int default_n = 0;              // preferred single-solve mesh parameter
};

/// The four built-in benchmark problems, ids "ex1".."ex4".
ProblemSpec builtin_example(const std::string& id);
std::vector<std::string> builtin_example_ids();

/// tau = 1 / (c1*k/h^2 + c2*|a|/h + c3*s). Throws std::invalid_argument
/// when all three terms vanish or h <= 0.
double eval_tau(double k, double a_norm, double s, double h,
                const StabilizationConstants& constants = {});

/// High-order composite quadrature of the QoI functional applied to the
/// analytic solution on a fine fixed grid, independent of the FE path.
/// Throws std::runtime_error when the problem has no analytic solution.
double eval_exact_qoi(const ProblemSpec& problem, int points_per_direction = 4);

/// Problem description from a JSON file: fields domain, n, k, s, a, f, q,
/// dirichlet (per-side constants); a/f/q hold expressions in x and y.
/// Optional reference_n for fine-mesh references.
ProblemSpec load_problem_json(const std::filesystem::path& file);

/// Mesh for the problem's domain kind; validates n against mesh_divisor.
Mesh build_mesh(const ProblemSpec& problem, int n);

}  // namespace osgs
