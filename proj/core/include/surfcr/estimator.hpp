#pragma once

#include <surfcr/cr_fem.hpp>
#include <surfcr/mesh.hpp>
#include <surfcr/norms.hpp>
#include <surfcr/solver.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace surfcr::estimator
{

/// eta_T = || G_h u_h - grad_{Gamma_h} u_h ||_{L2(T)} and their l2 sum. Only the
/// part of G_h u_h tangent to T enters the difference.
struct IndicatorField
{
  std::vector<double> eta;
  double global = 0.0;
};

IndicatorField indicators(const SurfaceMesh& mesh, const CRFunction& uh,
                          const CRVectorFunction& recovered, int degree = 4);

/// Bulk criterion: the shortest prefix of faces sorted by decreasing eta
/// (ties by index) whose squared sum reaches theta^2 * sum eta^2. Faces
/// with eta == 0 are never marked.
std::vector<int> dorfler_mark(const IndicatorField& field, double theta);

/// Right-hand side (sampled on the exact surface) and, when known, the
/// exact solution used for error reporting.
struct Problem
{
  SurfaceFunction rhs;
  std::optional<norms::ExactSolution> exact;
};

struct AdaptiveRecord
{
  int round = 0;
  int dof = 0;
  double eta = 0.0;
  std::optional<double> e, De, Die, Dre, kappa;
  int marked = 0;
  int cg_iterations = 0;
};

struct AdaptiveTrace
{
  std::vector<AdaptiveRecord> rounds;
  SurfaceMesh final_mesh;
  /// Faces of final_mesh marked in the last round.
  std::vector<int> final_marked;
  bool completed = false;
  std::string failure;
};

struct AdaptiveOptions
{
  /// Number of solve-estimate rounds; refinement happens between rounds.
  int rounds = 15;
  double theta = 0.5;
  ProjectionMode projection = ProjectionMode::exact;
  SolveOptions solver;
  int load_degree = 4;
  int error_degree = 4;
  /// Called after the estimate of every round.
  std::function<void(const AdaptiveRecord&, const SurfaceMesh&,
                     const CRFunction&, const CRVectorFunction&)>
      on_round;
};

/// assemble -> solve -> recover -> estimate -> mark -> bisect, repeated.
/// Library errors stop the loop and are reported in trace.failure with the
/// rounds completed so far.
AdaptiveTrace adapt_loop(const geometry::LevelSetSurface& surface,
                         const SurfaceMesh& initial, const Problem& problem,
                         const AdaptiveOptions& options);

} // namespace surfcr::estimator
