#include "llb/field.hpp"

#include <cmath>
#include <stdexcept>

#include "llb/params.hpp"

namespace llb {

NodalField::NodalField(std::vector<double> flat) : values_(std::move(flat)) {
  if (values_.size() % 3 != 0) throw std::invalid_argument("NodalField: length must be a multiple of 3");
}

NodalField NodalField::constant(const Mesh& mesh, const Vec3& c) {
  NodalField f(mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) f.set(v, c);
  return f;
}

NodalField NodalField::interpolate(const Mesh& mesh, const VectorFunction& fn) {
  NodalField f(mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) f.set(v, fn(mesh.vertex(v)));
  return f;
}

bool NodalField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

NodalField& NodalField::operator+=(const NodalField& other) {
  if (other.size() != size()) throw std::invalid_argument("NodalField: size mismatch");
  for (std::size_t i = 0; i < size(); ++i) values_[i] += other.values_[i];
  return *this;
}

NodalField& NodalField::operator-=(const NodalField& other) {
  if (other.size() != size()) throw std::invalid_argument("NodalField: size mismatch");
  for (std::size_t i = 0; i < size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

NodalField& NodalField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void SchemeParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(kappa1) || !(kappa1 > 0.0)) throw std::invalid_argument("kappa1 must be > 0");
  if (!finite(kappa2) || !(kappa2 > 0.0)) throw std::invalid_argument("kappa2 must be > 0");
  if (!finite(gamma)) throw std::invalid_argument("gamma must be finite");
  if (!finite(mu) || !(mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
  if (!finite(epsilon) || !(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
}

void TimeGrid::validate() const {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (!std::isfinite(T) || !(T > 0.0)) throw std::invalid_argument("T must be > 0");
}

}  // namespace llb
