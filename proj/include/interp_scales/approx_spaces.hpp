#pragma once

#include <cmath>
#include <string>

#include "interp_scales/boyd.hpp"
#include "interp_scales/detail/numeric.hpp"
#include "interp_scales/error.hpp"
#include "interp_scales/sequences.hpp"
#include "interp_scales/snorm.hpp"

namespace interp_scales {

/// Lorentz–Marcinkiewicz quasi-norm (phi, q).
struct LorentzMarcinkiewiczDescriptor {
  BoydFunction phi;
  double q = 1.0;
};

/// Phi-type quasi-norm.
struct PhiTypeDescriptor {
  SymmetricNormingFunction phi;
};

/// (sum_n [phi(n) E_n]^q / n)^(1/q); sup_n phi(n) E_n for q = inf.
inline double lorentz_marcinkiewicz_norm(const DecreasingSequence& e, const BoydFunction& phi, double q) {
  if (!(q > 0.0)) throw InvalidParameter("lorentz_marcinkiewicz_norm: q must be > 0");
  if (e.is_zero()) return 0.0;
  if (detail::is_pos_inf(q)) {
    double sup = 0.0;
    for (std::size_t n = 1; n <= e.size() && e.a(n) > 0.0; ++n) {
      sup = std::max(sup, phi(static_cast<double>(n)) * e.a(n));
    }
    return sup;
  }
  detail::CompensatedSum acc;
  for (std::size_t n = 1; n <= e.size() && e.a(n) > 0.0; ++n) {
    const double nd = static_cast<double>(n);
    const double term = phi(nd) * e.a(n);
    acc.add(q == 1.0 ? term / nd : std::pow(term, q) / nd);
  }
  return q == 1.0 ? acc.value() : std::pow(acc.value(), 1.0 / q);
}

inline double lorentz_marcinkiewicz_norm(const DecreasingSequence& e, const LorentzMarcinkiewiczDescriptor& d) {
  return lorentz_marcinkiewicz_norm(e, d.phi, d.q);
}

/// Phi((E_n)_n).
inline double phi_type_norm(const DecreasingSequence& e, const SymmetricNormingFunction& phi) { return phi(e); }

/// (sum E_n^p)^(1/p); E_1 for p = inf.
inline double gp_norm(const DecreasingSequence& e, double p) { return lp_norm(e, p); }

}  // namespace interp_scales
