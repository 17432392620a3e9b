#pragma once

#include "regent/linalg.hpp"

#include <string>

namespace regent {

enum class DivergenceKind { Umegaki, Min, Max, Measured, MeasuredHalf };

std::string to_string(DivergenceKind k);
DivergenceKind divergence_kind_from_string(const std::string& s);

/// Divergence value in bits; +infinity when the support condition fails.
struct DivergenceValue {
  double value = 0.0;
  DivergenceKind kind = DivergenceKind::Umegaki;
  bool is_infinite() const;
};

/// Support inclusion supp(rho) within supp(sigma), tested by ||(I - P_sigma) P_rho|| <= 1e-8.
bool support_contained(const HermitianOperator& rho, const HermitianOperator& sigma);

/// tr[rho (log rho - log sigma)].
DivergenceValue umegaki(const DensityOperator& rho, const HermitianOperator& sigma);
/// -log tr[P_rho sigma].
DivergenceValue d_min(const DensityOperator& rho, const HermitianOperator& sigma);
/// log inf{t : rho <= t sigma}.
DivergenceValue d_max(const DensityOperator& rho, const HermitianOperator& sigma);
/// sup_{w > 0} tr[rho ln w] + 1 - tr[sigma w], converted to bits.
DivergenceValue measured(const DensityOperator& rho, const HermitianOperator& sigma, double tol = 1e-8);
/// -log F(rho, sigma)^2.
DivergenceValue measured_half(const DensityOperator& rho, const HermitianOperator& sigma);

DivergenceValue divergence(DivergenceKind kind, const DensityOperator& rho, const HermitianOperator& sigma);

/// Classical relative entropy sum p log(p/q) in bits.
double classical_kl(const RVector& p, const RVector& q);

}  // namespace regent
