#include "llb/output.hpp"

#include <cstdio>
#include <fstream>

namespace llb {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw OutputError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
  return out;
}

void close(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw OutputError("write to '" + path.string() + "' failed");
}

int vtk_cell_type(int dim) {
  switch (dim) {
    case 1: return 3;   // VTK_LINE
    case 2: return 5;   // VTK_TRIANGLE
    default: return 10; // VTK_TETRA
  }
}

}  // namespace

void write_vtk(const Mesh& mesh, const NodalField& u, const std::filesystem::path& path) {
  if (!u.matches(mesh)) throw std::invalid_argument("write_vtk: field does not live on mesh");
  std::ofstream out = open_for_write(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "llb field u\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vec3& p : mesh.vertices())
    out << format_number(p[0]) << ' ' << format_number(p[1]) << ' ' << format_number(p[2]) << '\n';
  const int nloc = mesh.dim() + 1;
  out << "CELLS " << mesh.num_cells() << ' ' << mesh.num_cells() * (nloc + 1) << '\n';
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    out << nloc;
    for (Index v : mesh.cell(c)) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (Index c = 0; c < mesh.num_cells(); ++c) out << vtk_cell_type(mesh.dim()) << '\n';
  out << "POINT_DATA " << mesh.num_vertices() << '\n';
  out << "VECTORS u double\n";
  for (Index v = 0; v < u.num_vertices(); ++v) {
    const Vec3 x = u.at(v);
    out << format_number(x[0]) << ' ' << format_number(x[1]) << ' ' << format_number(x[2]) << '\n';
  }
  close(out, path);
}

void write_csv(const ErrorTable& table, const std::filesystem::path& path) {
  const RateReport rates = compute_rates(table);
  std::ofstream out = open_for_write(path);
  out << "parameter,err_l2,err_h1,err_linf,rate_l2,rate_h1,rate_linf\n";
  auto rate = [](const RateSequence& s, std::size_t row) {
    if (row == 0 || !s.ratios[row - 1]) return std::string();
    return format_number(*s.ratios[row - 1]);
  };
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    const ErrorLevel& l = table.levels[i];
    out << format_number(l.parameter) << ',' << format_number(l.l2) << ',' << format_number(l.h1) << ','
        << format_number(l.linf) << ',' << rate(rates.l2, i) << ',' << rate(rates.h1, i) << ','
        << rate(rates.linf, i) << '\n';
  }
  close(out, path);
}

void write_csv(std::span<const NormSample> norms, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << "t,l2,h1_semi,h1,linf,l4\n";
  for (const NormSample& s : norms)
    out << format_number(s.t) << ',' << format_number(s.l2) << ',' << format_number(s.h1_semi) << ','
        << format_number(s.h1) << ',' << format_number(s.linf) << ',' << format_number(s.l4) << '\n';
  close(out, path);
}

void write_csv(std::span<const DecayMargin> margins, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << "step,t,energy,envelope,margin\n";
  for (const DecayMargin& m : margins)
    out << m.step << ',' << format_number(m.t) << ',' << format_number(m.energy) << ',' << format_number(m.envelope)
        << ',' << format_number(m.margin) << '\n';
  close(out, path);
}

void write_csv(std::span<const LinfSample> samples, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << "t,linf,scaled\n";
  for (const LinfSample& s : samples)
    out << format_number(s.t) << ',' << format_number(s.linf) << ',' << format_number(s.scaled) << '\n';
  close(out, path);
}

}  // namespace llb
