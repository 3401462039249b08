#pragma once

// Parameterized Hermitian matrix families defined by matrix-DSL text.
// Hermiticity is checked at every evaluation, never silently repaired:
// a symmetrized matrix would mask mistakes in the user's entries.

#include <Eigen/Dense>

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "holonomy/core.hpp"
#include "holonomy/dsl.hpp"
#include "holonomy/errors.hpp"

namespace holonomy {

inline constexpr double kDefaultHermiticityTol = 1e-10;

// Square grid of parsed expression trees plus the declared parameter names.
struct MatrixExpr {
  std::vector<std::vector<dsl::ExprPtr>> entries;
  std::vector<std::string> parameter_names;
};

class HamiltonianFamily {
 public:
  HamiltonianFamily(MatrixExpr expr, double hermiticity_tol = kDefaultHermiticityTol)
      : expr_(std::move(expr)), hermiticity_tol_(hermiticity_tol) {
    const std::size_t n = expr_.entries.size();
    if (n < 2) throw DomainError("HamiltonianFamily: matrix dimension must be >= 2");
    for (const auto& row : expr_.entries)
      if (row.size() != n)
        throw DomainError("HamiltonianFamily: matrix is not square");
    if (!(hermiticity_tol_ >= 0.0))
      throw DomainError("HamiltonianFamily: hermiticity tolerance must be >= 0");
  }

  Eigen::Index dimension() const noexcept {
    return static_cast<Eigen::Index>(expr_.entries.size());
  }
  const std::vector<std::string>& parameter_names() const noexcept {
    return expr_.parameter_names;
  }
  std::size_t parameter_count() const noexcept { return expr_.parameter_names.size(); }
  double hermiticity_tol() const noexcept { return hermiticity_tol_; }
  const MatrixExpr& expr() const noexcept { return expr_; }

  // DSL text that reparses to an equivalent family.
  std::string to_text() const {
    std::string out = "[";
    for (std::size_t r = 0; r < expr_.entries.size(); ++r) {
      out += (r == 0) ? "[" : ", [";
      for (std::size_t c = 0; c < expr_.entries[r].size(); ++c) {
        if (c != 0) out += ", ";
        out += dsl::to_text(*expr_.entries[r][c]);
      }
      out += "]";
    }
    out += "]";
    return out;
  }

 private:
  MatrixExpr expr_;
  double hermiticity_tol_;
};

// Parses bracketed row-major matrix text over the declared parameters.
inline HamiltonianFamily parse_family(std::string_view text,
                                      std::vector<std::string> parameter_names,
                                      double hermiticity_tol = kDefaultHermiticityTol) {
  for (std::size_t k = 0; k < parameter_names.size(); ++k) {
    const std::string& name = parameter_names[k];
    if (name.empty()) throw DomainError("parse_family: empty parameter name");
    if (dsl::is_reserved_name(name))
      throw DomainError("parse_family: parameter name '" + name + "' is reserved");
    for (std::size_t j = 0; j < k; ++j)
      if (parameter_names[j] == name)
        throw DomainError("parse_family: duplicate parameter name '" + name + "'");
  }
  dsl::detail::Parser parser(text, parameter_names);
  MatrixExpr expr{parser.parse_matrix_only(), std::move(parameter_names)};
  const std::size_t n = expr.entries.size();
  if (n < 2) throw DomainError("parse_family: matrix dimension must be >= 2");
  for (const auto& row : expr.entries)
    if (row.size() != n) throw DomainError("parse_family: matrix is not square");
  return HamiltonianFamily(std::move(expr), hermiticity_tol);
}

// Evaluates the family at raw coordinates (size must match the declared
// parameter count; may be empty for constant families).
inline Eigen::MatrixXcd evaluate(const HamiltonianFamily& family,
                                 std::span<const double> coords) {
  if (coords.size() != family.parameter_count())
    throw DomainError("evaluate: expected " + std::to_string(family.parameter_count()) +
                      " coordinates, got " + std::to_string(coords.size()));
  const Eigen::Index n = family.dimension();
  Eigen::MatrixXcd h(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const Complex v = dsl::eval(*family.expr().entries[static_cast<std::size_t>(r)]
                                                        [static_cast<std::size_t>(c)],
                                  coords);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError("evaluate: non-finite entry (" + std::to_string(r) + ", " +
                          std::to_string(c) + ")");
      h(r, c) = v;
    }
  }
  const double deviation = (h - h.adjoint().eval()).cwiseAbs().maxCoeff();
  if (deviation > family.hermiticity_tol())
    throw DomainError("evaluate: matrix is not Hermitian, max |H - H^dagger| = " +
                      std::to_string(deviation));
  return h;
}

inline Eigen::MatrixXcd evaluate(const HamiltonianFamily& family,
                                 const ParameterPoint& point) {
  return evaluate(family, std::span<const double>(point.coordinates().data(),
                                                  static_cast<std::size_t>(
                                                      point.dimension())));
}

// The polar-form two-level family over (r, phi): diagonal +-r cos(phi),
// symmetric off-diagonal r sin(phi).  Eigenvalues are +-r for every phi.
inline HamiltonianFamily builtin_spinor_family() {
  return parse_family("[[r*cos(phi), r*sin(phi)],[r*sin(phi), -r*cos(phi)]]",
                      {"r", "phi"});
}

}  // namespace holonomy
