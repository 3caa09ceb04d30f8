#include "osgs/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace osgs {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_vtk(const std::filesystem::path& path, const Mesh& mesh,
               const std::vector<NamedField>& point_data,
               const std::vector<NamedField>& cell_data) {
  auto out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "osgs fields\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_nodes() << " double\n";
  for (const auto& [x, y] : mesh.nodes) out << fmt(x) << " " << fmt(y) << " 0\n";

  const int nn = mesh.nodes_per_element;
  out << "CELLS " << mesh.n_elements() << " " << mesh.n_elements() * (nn + 1) << "\n";
  for (const auto& conn : mesh.elements) {
    out << nn;
    for (int i = 0; i < nn; ++i) out << " " << conn[i];
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.n_elements() << "\n";
  const int cell_type = (mesh.dim == 1) ? 3 : 9;  // VTK_LINE / VTK_QUAD
  for (int e = 0; e < mesh.n_elements(); ++e) out << cell_type << "\n";

  if (!point_data.empty()) {
    out << "POINT_DATA " << mesh.n_nodes() << "\n";
    for (const auto& [name, values] : point_data) {
      if (static_cast<int>(values.size()) != mesh.n_nodes())
        throw std::invalid_argument("vtk: point field '" + name + "' has wrong length");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << fmt(v) << "\n";
    }
  }
  if (!cell_data.empty()) {
    out << "CELL_DATA " << mesh.n_elements() << "\n";
    for (const auto& [name, values] : cell_data) {
      if (static_cast<int>(values.size()) != mesh.n_elements())
        throw std::invalid_argument("vtk: cell field '" + name + "' has wrong length");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << fmt(v) << "\n";
    }
  }
}

void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRecord>& records) {
  auto out = open_out(path);
  out << "example,n,h,dofs,Q_uh,Q_ref,ref_provenance,err_abs,eta1,eta2,ieff1,ieff2,"
         "rate_pairwise\n";
  for (const auto& r : records) {
    out << r.example << "," << r.n << "," << fmt(r.h) << "," << r.dofs << "," << fmt(r.q_uh)
        << "," << fmt(r.q_ref) << "," << r.ref_provenance << "," << fmt(r.err_abs) << ","
        << fmt(r.eta1) << "," << fmt(r.eta2) << "," << fmt(r.ieff1) << "," << fmt(r.ieff2)
        << "," << fmt(r.rate_pairwise) << "\n";
  }
}

std::vector<ConvergenceRecord> read_convergence_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<ConvergenceRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    ConvergenceRecord r;
    auto next = [&]() {
      if (!std::getline(ss, field, ',')) throw std::runtime_error("malformed CSV row: " + line);
      return field;
    };
    r.example = next();
    r.n = std::stoi(next());
    r.h = std::stod(next());
    r.dofs = std::stoi(next());
    r.q_uh = std::stod(next());
    r.q_ref = std::stod(next());
    r.ref_provenance = next();
    r.err_abs = std::stod(next());
    r.eta1 = std::stod(next());
    r.eta2 = std::stod(next());
    r.ieff1 = std::stod(next());
    r.ieff2 = std::stod(next());
    r.rate_pairwise = std::stod(next());
    records.push_back(std::move(r));
  }
  return records;
}

void write_element_csv(const std::filesystem::path& path, const Mesh& mesh,
                       const std::vector<double>& eta1_K, const std::vector<double>& eta2_K,
                       const std::vector<double>& tau_K) {
  auto out = open_out(path);
  out << "element,xc,yc,eta1K,eta2K,tauK\n";
  for (int e = 0; e < mesh.n_elements(); ++e) {
    double xc = 0.0, yc = 0.0;
    for (int i = 0; i < mesh.nodes_per_element; ++i) {
      xc += mesh.nodes[mesh.elements[e][i]][0];
      yc += mesh.nodes[mesh.elements[e][i]][1];
    }
    xc /= mesh.nodes_per_element;
    yc /= mesh.nodes_per_element;
    out << e << "," << fmt(xc) << "," << fmt(yc) << "," << fmt(eta1_K[e]) << ","
        << fmt(eta2_K[e]) << "," << fmt(tau_K[e]) << "\n";
  }
}

}  // namespace osgs
