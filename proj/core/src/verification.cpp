#include "llb/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "llb/assembly.hpp"
#include "llb/quadrature.hpp"
#include "llb/scheme.hpp"

namespace llb {

OracleReport make_report(std::string name, double discrepancy, double threshold, std::string detail) {
  return {std::move(name), discrepancy, threshold, discrepancy <= threshold, std::move(detail)};
}

namespace {

constexpr double pi = std::numbers::pi;

// Affine data of one cell, derived from its vertex matrix rather than edge vectors:
// row a of T is (1, x_a), and the barycentric coefficients are the columns of T^{-1}.
struct LocalCell {
  int nloc = 0;
  double measure = 0.0;
  std::array<Vec3, 4> vertex{};
  std::array<Vec3, 4> grad{};
};

double determinant(DenseMatrix m) {
  const std::size_t n = m.rows;
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(p, c))) p = r;
    if (m(p, c) == 0.0) return 0.0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

LocalCell local_cell(const Mesh& mesh, Index c) {
  const int d = mesh.dim();
  LocalCell lc;
  lc.nloc = d + 1;
  const auto n = static_cast<std::size_t>(d + 1);
  DenseMatrix t(n, n);
  const auto cv = mesh.cell(c);
  for (std::size_t a = 0; a < n; ++a) {
    lc.vertex[a] = mesh.vertex(cv[a]);
    t(a, 0) = 1.0;
    for (int i = 0; i < d; ++i) t(a, static_cast<std::size_t>(i) + 1) = lc.vertex[a][static_cast<std::size_t>(i)];
  }
  double fact = 1.0;
  for (int i = 2; i <= d; ++i) fact *= i;
  lc.measure = std::abs(determinant(t)) / fact;
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<double> e(n, 0.0);
    e[a] = 1.0;
    const std::vector<double> coef = dense_lu_solve(t, e);
    Vec3 g{0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) g[static_cast<std::size_t>(i)] = coef[static_cast<std::size_t>(i) + 1];
    lc.grad[a] = g;
  }
  return lc;
}

Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 basis(std::size_t j) {
  Vec3 e{0.0, 0.0, 0.0};
  e[j] = 1.0;
  return e;
}

}  // namespace

NodalField dense_oracle_step(const Mesh& mesh, const SchemeParams& params, double k, const NodalField& u_prev) {
  params.validate();
  if (!(k > 0.0)) throw std::invalid_argument("dense_oracle_step: k must be positive");
  if (mesh.num_vertices() > dense_oracle_max_vertices)
    throw std::invalid_argument("dense_oracle_step: mesh too large for the dense oracle");
  if (!u_prev.matches(mesh)) throw std::invalid_argument("dense_oracle_step: field does not live on mesh");

  const auto n = 3 * static_cast<std::size_t>(mesh.num_vertices());
  DenseMatrix a(n, n);
  std::vector<double> rhs(n, 0.0);
  const QuadRule& rule = simplex_rule(mesh.dim(), 6);
  const double ref = reference_measure(mesh.dim());
  const double eps = params.epsilon;

  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const LocalCell lc = local_cell(mesh, c);
    const auto cv = mesh.cell(c);
    const auto nl = static_cast<std::size_t>(lc.nloc);
    // Gradient of each component of u_prev on this cell.
    std::array<Vec3, 3> grad_prev{};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t b = 0; b < nl; ++b)
        for (std::size_t l = 0; l < 3; ++l) grad_prev[i][l] += u_prev.at(cv[b])[i] * lc.grad[b][l];

    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double wq = rule.weights[q] * lc.measure / ref;
      const auto& lam = rule.points[q];
      Vec3 w{0.0, 0.0, 0.0};
      for (std::size_t b = 0; b < nl; ++b)
        for (std::size_t i = 0; i < 3; ++i) w[i] += lam[b] * u_prev.at(cv[b])[i];
      const double w2 = dot3(w, w);

      for (std::size_t ra = 0; ra < nl; ++ra) {
        const std::size_t va = static_cast<std::size_t>(cv[ra]);
        for (std::size_t i = 0; i < 3; ++i) {
          const std::size_t row = 3 * va + i;
          // (M + eps S) u_prev tested with phi_a e_i.
          rhs[row] += wq * (w[i] * lam[ra] + eps * dot3(grad_prev[i], lc.grad[ra]));
          for (std::size_t rb = 0; rb < nl; ++rb) {
            const std::size_t vb = static_cast<std::size_t>(cv[rb]);
            const double phiphi = lam[ra] * lam[rb];
            const double gradgrad = dot3(lc.grad[ra], lc.grad[rb]);
            for (std::size_t j = 0; j < 3; ++j) {
              double v = cross3(w, basis(j))[i] * params.gamma * k * gradgrad;
              if (i == j)
                v += (1.0 + k * params.kappa2 + k * params.kappa2 * params.mu * w2) * phiphi +
                     (eps + k * params.kappa1) * gradgrad;
              a(row, 3 * vb + j) += wq * v;
            }
          }
        }
      }
    }
  }
  return NodalField(dense_lu_solve(std::move(a), std::move(rhs)));
}

std::vector<Vec3> constant_field_trajectory(const Vec3& c0, const SchemeParams& params, double k, int N) {
  if (N < 0) throw std::invalid_argument("constant_field_trajectory: N must be nonnegative");
  std::vector<Vec3> out{c0};
  out.reserve(static_cast<std::size_t>(N) + 1);
  for (int j = 1; j <= N; ++j) {
    const Vec3& c = out.back();
    const double s = 1.0 / (1.0 + k * params.kappa2 * (1.0 + params.mu * dot3(c, c)));
    out.push_back({c[0] * s, c[1] * s, c[2] * s});
  }
  return out;
}

ManufacturedSolution::ManufacturedSolution(std::string name, SchemeParams params,
                                           std::array<std::vector<CosineMode>, 3> modes)
    : name_(std::move(name)), params_(params), modes_(std::move(modes)) {
  params_.validate();
}

namespace {

double mode_value(const CosineMode& m, const Vec3& x, double t) {
  double v = m.amp * std::exp(-m.decay * t);
  for (std::size_t d = 0; d < 3; ++d) v *= std::cos(m.wave[d] * pi * x[d]);
  return v;
}

double mode_eigen(const CosineMode& m) {
  double s = 0.0;
  for (int w : m.wave) s += static_cast<double>(w * w);
  return pi * pi * s;
}

}  // namespace

Vec3 ManufacturedSolution::value(const Vec3& x, double t) const {
  Vec3 u{0.0, 0.0, 0.0};
  for (std::size_t c = 0; c < 3; ++c)
    for (const auto& m : modes_[c]) u[c] += mode_value(m, x, t);
  return u;
}

std::array<Vec3, 3> ManufacturedSolution::gradient(const Vec3& x, double t) const {
  std::array<Vec3, 3> g{};
  for (std::size_t c = 0; c < 3; ++c)
    for (const auto& m : modes_[c])
      for (std::size_t l = 0; l < 3; ++l) {
        double v = m.amp * std::exp(-m.decay * t);
        for (std::size_t d = 0; d < 3; ++d) {
          const double arg = m.wave[d] * pi * x[d];
          v *= d == l ? -m.wave[d] * pi * std::sin(arg) : std::cos(arg);
        }
        g[c][l] += v;
      }
  return g;
}

Vec3 ManufacturedSolution::laplacian(const Vec3& x, double t) const {
  Vec3 l{0.0, 0.0, 0.0};
  for (std::size_t c = 0; c < 3; ++c)
    for (const auto& m : modes_[c]) l[c] -= mode_eigen(m) * mode_value(m, x, t);
  return l;
}

Vec3 ManufacturedSolution::time_derivative(const Vec3& x, double t) const {
  Vec3 v{0.0, 0.0, 0.0};
  for (std::size_t c = 0; c < 3; ++c)
    for (const auto& m : modes_[c]) v[c] -= m.decay * mode_value(m, x, t);
  return v;
}

Vec3 ManufacturedSolution::forcing(const Vec3& x, double t) const {
  const Vec3 u = value(x, t);
  const Vec3 lap = laplacian(x, t);
  const Vec3 ut = time_derivative(x, t);
  Vec3 lap_ut{0.0, 0.0, 0.0};
  for (std::size_t c = 0; c < 3; ++c)
    for (const auto& m : modes_[c]) lap_ut[c] += m.decay * mode_eigen(m) * mode_value(m, x, t);
  const Vec3 gyro = cross3(u, lap);
  const double damp = params_.kappa2 * (1.0 + params_.mu * dot3(u, u));
  Vec3 f{};
  for (std::size_t c = 0; c < 3; ++c)
    f[c] = ut[c] - params_.epsilon * lap_ut[c] - params_.kappa1 * lap[c] - params_.gamma * gyro[c] + damp * u[c];
  return f;
}

ManufacturedSolution linear_manufactured_solution() {
  SchemeParams p;
  p.kappa1 = 1.0;
  p.kappa2 = 1.0;
  return ManufacturedSolution("linear", p, {{{CosineMode{1.0, 1.0, {1, 0, 0}}}, {}, {}}});
}

ManufacturedSolution full_manufactured_solution() {
  SchemeParams p;
  p.kappa1 = 1.0;
  p.kappa2 = 2.0;
  p.gamma = 5.0;
  p.mu = 1.0;
  p.epsilon = 1e-3;
  return ManufacturedSolution("full", p,
                              {{{CosineMode{1.0, 1.0, {1, 1, 0}}}, {CosineMode{1.0, 2.0, {2, 0, 0}}}, {}}});
}

ExactError error_against(const Mesh& mesh, const NodalField& u, const ManufacturedSolution& ms, double t) {
  if (!u.matches(mesh)) throw std::invalid_argument("error_against: field does not live on mesh");
  const QuadRule& rule = simplex_rule(mesh.dim(), 6);
  const double ref = reference_measure(mesh.dim());
  double l2 = 0.0, semi = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const LocalCell lc = local_cell(mesh, c);
    const auto cv = mesh.cell(c);
    const auto nl = static_cast<std::size_t>(lc.nloc);
    std::array<Vec3, 3> gh{};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t b = 0; b < nl; ++b)
        for (std::size_t l = 0; l < 3; ++l) gh[i][l] += u.at(cv[b])[i] * lc.grad[b][l];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double wq = rule.weights[q] * lc.measure / ref;
      const auto& lam = rule.points[q];
      Vec3 x{0.0, 0.0, 0.0}, uh{0.0, 0.0, 0.0};
      for (std::size_t b = 0; b < nl; ++b)
        for (std::size_t i = 0; i < 3; ++i) {
          x[i] += lam[b] * lc.vertex[b][i];
          uh[i] += lam[b] * u.at(cv[b])[i];
        }
      const Vec3 ue = ms.value(x, t);
      const auto ge = ms.gradient(x, t);
      for (std::size_t i = 0; i < 3; ++i) {
        l2 += wq * (uh[i] - ue[i]) * (uh[i] - ue[i]);
        for (std::size_t l = 0; l < static_cast<std::size_t>(mesh.dim()); ++l)
          semi += wq * (gh[i][l] - ge[i][l]) * (gh[i][l] - ge[i][l]);
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

MmsRun run_manufactured(const ManufacturedSolution& ms, const MmsConfig& config) {
  if (config.levels.size() < 3) throw std::invalid_argument("run_manufactured: need at least 3 levels");
  MmsRun run;
  run.name = ms.name();
  run.levels = config.levels;
  const SpaceTimeFunction f = [&ms](const Vec3& x, double t) { return ms.forcing(x, t); };
  for (int n : config.levels) {
    auto mesh = std::make_shared<const Mesh>(unit_square_mesh(n));
    const int N = static_cast<int>(std::ceil(config.steps_per_h2 * n * n));
    const TimeGrid grid{config.T, N};
    const double k = grid.step();
    SimState s = init_state(mesh, [&ms](const Vec3& x) { return ms.value(x, 0.0); }, ms.params(), config.solver);
    for (int j = 0; j < N; ++j) s = step_with_forcing(s, ms.params(), k, f, config.solver);
    run.errors.push_back(error_against(*mesh, s.u, ms, config.T));
  }
  const std::size_t m = run.errors.size();
  auto rate = [&](auto member) {
    const double r1 = std::log2(run.errors[m - 3].*member / run.errors[m - 2].*member);
    const double r2 = std::log2(run.errors[m - 2].*member / run.errors[m - 1].*member);
    return 0.5 * (r1 + r2);
  };
  run.l2_rate = rate(&ExactError::l2);
  run.h1_rate = rate(&ExactError::h1);
  return run;
}

std::vector<OracleReport> manufactured_suite(const MmsConfig& config) {
  std::vector<OracleReport> out;
  for (const auto& ms : {linear_manufactured_solution(), full_manufactured_solution()}) {
    const MmsRun run = run_manufactured(ms, config);
    std::string detail = "errors (L2, H1):";
    for (const auto& e : run.errors) detail += " (" + std::to_string(e.l2) + ", " + std::to_string(e.h1) + ")";
    out.push_back(make_report("mms " + run.name + " L2 rate " + std::to_string(run.l2_rate),
                              std::abs(run.l2_rate - 2.0), config.rate_window, detail));
    out.push_back(make_report("mms " + run.name + " H1 rate " + std::to_string(run.h1_rate),
                              std::abs(run.h1_rate - 1.0), config.rate_window, detail));
  }
  return out;
}

namespace {

NodalField random_field(const Mesh& mesh, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  NodalField u = NodalField::zeros(mesh);
  for (double& v : u.flat()) v = dist(rng);
  return u;
}

SchemeParams simulation1_params() { return {5.0, 2.0, 50.0, 1.0, 1e-3}; }
SchemeParams simulation3_params() { return {0.02, 0.04, 0.05, 0.5, 1e-3}; }

}  // namespace

std::vector<OracleReport> oracle_suite(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<OracleReport> out;
  SolverOptions tight;
  tight.tol = 1e-14;

  {
    const std::vector<Mesh> meshes = {unit_square_mesh(2), unit_square_mesh(5), l_shape_mesh(2), unit_cube_mesh(2),
                                      fichera_mesh(1)};
    double worst = 0.0;
    int cases = 0;
    for (const SchemeParams& p : {simulation1_params(), simulation3_params()})
      for (const Mesh& m : meshes)
        for (int r = 0; r < 2; ++r) {
          auto mesh = std::make_shared<const Mesh>(m);
          SimState s;
          s.disc = std::make_shared<const Discretization>(mesh);
          s.u = random_field(*mesh, rng);
          const NodalField next = step(s, p, 2.5e-3, tight).u;
          const NodalField ref = dense_oracle_step(*mesh, p, 2.5e-3, s.u);
          for (std::size_t i = 0; i < next.size(); ++i) worst = std::max(worst, std::abs(next.flat()[i] - ref.flat()[i]));
          ++cases;
        }
    out.push_back(make_report("dense oracle step agreement", worst, 1e-10, std::to_string(cases) + " random steps"));
  }

  {
    SchemeParams p;
    p.kappa2 = 2.0;
    p.mu = 1.0;
    p.gamma = 50.0;
    const double k = 0.1;
    const Vec3 c0{1.0, 0.0, 0.0};
    const auto expected = constant_field_trajectory(c0, p, k, 5);
    auto mesh = std::make_shared<const Mesh>(unit_square_mesh(3));
    SimState s = init_state(mesh, [&](const Vec3&) { return c0; }, p, tight);
    double worst = 0.0;
    for (int j = 1; j <= 5; ++j) {
      s = step(s, p, k, tight);
      for (Index v = 0; v < mesh->num_vertices(); ++v)
        for (std::size_t i = 0; i < 3; ++i)
          worst = std::max(worst, std::abs(s.u.at(v)[i] - expected[static_cast<std::size_t>(j)][i]));
    }
    out.push_back(make_report("constant field recurrence", worst, 1e-9));
  }

  {
    double worst = 0.0;
    for (const Mesh& m : {unit_square_mesh(8), unit_cube_mesh(3)}) {
      const OperatorAssembler asmb(m);
      for (int r = 0; r < 25; ++r) {
        const SparseMatrix c = asmb.cross(random_field(m, rng));
        const SparseMatrix sym = add(1.0, c, 1.0, c.transpose());
        worst = std::max(worst, sym.max_abs() / c.max_abs());
      }
    }
    out.push_back(make_report("cross operator skew-symmetry (relative)", worst, 1e-13));
  }
  return out;
}

}  // namespace llb
