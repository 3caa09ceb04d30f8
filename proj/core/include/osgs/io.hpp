#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "osgs/harness.hpp"
#include "osgs/mesh.hpp"

namespace osgs {

using NamedField = std::pair<std::string, std::vector<double>>;

/// Legacy-VTK ASCII unstructured grid (cell types 3 and 9).
void write_vtk(const std::filesystem::path& path, const Mesh& mesh,
               const std::vector<NamedField>& point_data,
               const std::vector<NamedField>& cell_data);

/// Convergence table, 17 significant digits:
/// example,n,h,dofs,Q_uh,Q_ref,ref_provenance,err_abs,eta1,eta2,ieff1,ieff2,rate_pairwise
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRecord>& records);
std::vector<ConvergenceRecord> read_convergence_csv(const std::filesystem::path& path);

/// Per-element table: element,xc,yc,eta1K,eta2K,tauK.
void write_element_csv(const std::filesystem::path& path, const Mesh& mesh,
                       const std::vector<double>& eta1_K, const std::vector<double>& eta2_K,
                       const std::vector<double>& tau_K);

}  // namespace osgs
