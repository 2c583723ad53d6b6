#pragma once

#include "excursion/quad/integrate.hpp"

namespace excursion::quad {

/// Psi(u) = P{N(0,1) > u}, via erfc with the 1/sqrt(2) argument scaling
/// corrected to first order.
double normal_survival(double u) noexcept;

/// Standard normal density.
double normal_density(double u) noexcept;

/// G_beta = int_0^inf exp(-x^beta) dx = Gamma(1 + 1/beta).
double g_beta(double beta);

/// K_beta = int int_{R_+^2} exp(-x^beta - y^beta - (xy)^(beta/2)) dx dy.
/// The square is truncated where exp(-R^beta) < tail_cut_tol and the
/// symmetry x <-> y is used.
double k_beta(double beta, const QuadratureConfig& cfg = {});

/// L(c) = int_0^inf exp(-x^2 - c x) dx, c >= 0.
double trend_l(double c, const QuadratureConfig& cfg = {});

/// K(c1,c2) = int int_{R_+^2} exp(-x^2 - y^2 - xy - c1 x - c2 y) dx dy.
double trend_k(double c1, double c2, const QuadratureConfig& cfg = {});

}  // namespace excursion::quad
