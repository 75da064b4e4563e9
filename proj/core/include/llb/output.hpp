#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include "llb/diagnostics.hpp"
#include "llb/field.hpp"
#include "llb/mesh.hpp"
#include "llb/norms.hpp"
#include "llb/studies.hpp"

namespace llb {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Legacy ASCII VTK unstructured grid with the field as point vectors "u". Points always carry
/// three coordinates (z = 0 in 2D); numbers use 17 significant digits. Parent directories are
/// created. Throws OutputError on I/O failure.
void write_vtk(const Mesh& mesh, const NodalField& u, const std::filesystem::path& path);

/// parameter,err_l2,err_h1,err_linf,rate_l2,rate_h1,rate_linf. The rate columns of row i hold
/// log2(e_{i-1}/e_i) and are empty on the first row or when undefined.
void write_csv(const ErrorTable& table, const std::filesystem::path& path);
/// t,l2,h1_semi,h1,linf,l4
void write_csv(std::span<const NormSample> norms, const std::filesystem::path& path);
/// step,t,energy,envelope,margin
void write_csv(std::span<const DecayMargin> margins, const std::filesystem::path& path);
/// t,linf,scaled
void write_csv(std::span<const LinfSample> samples, const std::filesystem::path& path);

/// 17-significant-digit decimal text.
std::string format_number(double v);

}  // namespace llb
