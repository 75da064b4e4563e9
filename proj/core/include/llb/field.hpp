#pragma once

#include <functional>
#include <span>
#include <vector>

#include "llb/mesh.hpp"

namespace llb {

/// R^3-valued analytic function of space.
using VectorFunction = std::function<Vec3(const Vec3&)>;
/// R^3-valued analytic function of space and time.
using SpaceTimeFunction = std::function<Vec3(const Vec3&, double)>;

/// Piecewise-linear R^3-valued field: one 3-vector per mesh vertex, stored vertex-major
/// (v0x, v0y, v0z, v1x, ...).
class NodalField {
 public:
  NodalField() = default;
  explicit NodalField(Index num_vertices) : values_(3 * static_cast<std::size_t>(num_vertices), 0.0) {}
  explicit NodalField(std::vector<double> flat);

  static NodalField zeros(const Mesh& mesh) { return NodalField(mesh.num_vertices()); }
  static NodalField constant(const Mesh& mesh, const Vec3& c);
  /// Nodal interpolant of f.
  static NodalField interpolate(const Mesh& mesh, const VectorFunction& f);

  Index num_vertices() const { return static_cast<Index>(values_.size() / 3); }
  std::size_t size() const { return values_.size(); }

  Vec3 at(Index v) const {
    const auto i = 3 * static_cast<std::size_t>(v);
    return {values_[i], values_[i + 1], values_[i + 2]};
  }
  void set(Index v, const Vec3& x) {
    const auto i = 3 * static_cast<std::size_t>(v);
    values_[i] = x[0];
    values_[i + 1] = x[1];
    values_[i + 2] = x[2];
  }

  std::span<const double> flat() const { return values_; }
  std::span<double> flat() { return values_; }
  const std::vector<double>& vector() const { return values_; }

  bool matches(const Mesh& mesh) const { return num_vertices() == mesh.num_vertices(); }
  bool all_finite() const;

  NodalField& operator+=(const NodalField& other);
  NodalField& operator-=(const NodalField& other);
  NodalField& operator*=(double s);

  friend NodalField operator-(NodalField a, const NodalField& b) { return a -= b; }
  friend NodalField operator+(NodalField a, const NodalField& b) { return a += b; }
  friend NodalField operator*(double s, NodalField a) { return a *= s; }
  friend bool operator==(const NodalField&, const NodalField&) = default;

 private:
  std::vector<double> values_;
};

}  // namespace llb
