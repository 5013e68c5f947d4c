#ifndef RLAB_SYMBOL_HPP
#define RLAB_SYMBOL_HPP

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "rlab/field.hpp"

namespace rlab {

/// Fourier multiplier xi -> s(xi). Evaluation must be pure.
struct Symbol {
  std::function<Complex(const Eigen::Vector3d&)> evaluate;
  std::string label;

  Complex operator()(const Eigen::Vector3d& xi) const { return evaluate(xi); }
};

/// Pointwise product of two symbols.
Symbol operator*(const Symbol& a, const Symbol& b);

namespace symbols {
Symbol identity();
/// xi_j (0-based axis).
Symbol coordinate(int axis);
/// |xi_j|^power.
Symbol axis_power(int axis, double power);
/// 1/|xi|^2; singular at the origin.
Symbol inverse_square();
/// (1 + |xi|^2)^(s/2).
Symbol bessel(double s);
} // namespace symbols

/// Thrown when a symbol is non-finite on a mode that carries data.
class SingularSymbolError : public std::domain_error {
public:
  SingularSymbolError(const std::string& label, int m1, int m2, int m3);
  int m1, m2, m3;
};

/// Multiplies fhat by s(xi). Modes where fhat is exactly zero are inactive
/// and never evaluated for finiteness. Returns the caller's representation.
Field apply_symbol(const Field& f, const Symbol& s);

/// Unit-modulus multipliers exp(-i t |xi|^2) for every mode; shared by
/// free_propagate and the split-step integrators so both produce the same
/// bits.
Eigen::ArrayXcd propagator_multiplier(const Grid& g, double t);

/// exp(i t Laplacian) f.
Field free_propagate(const Field& f, double t);

/// |D_{x_j}|^{1/2} f.
Field half_derivative(const Field& f, int axis);

} // namespace rlab

#endif
