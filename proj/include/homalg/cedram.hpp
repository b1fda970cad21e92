#pragma once

#include "homalg/algebroid.hpp"

namespace homalg {

SForm d_L(const HomAlgebroid& L, const SForm& w);
/// d_L(d_L(w)), expected to vanish at loss 2.
SForm d_squared_residual(const HomAlgebroid& L, const SForm& w);

/// phi_E w phi_E^{-1} t phi_E^{-1} - phi_E t phi_E^{-1} w phi_E^{-1}.
Twisted end_bracket(const HomBundle& E, const Twisted& w, const Twisted& t);

/// End(E)-valued wedge with the phi_E^{-1} twist between factors.
MForm wedge_end(const HomBundle& E, const MForm& w, const MForm& t);
/// Twisted commutator for degree 0; permutation sum over phi_L^{-1}-shifted arguments otherwise.
MForm form_bracket(const HomBundle& E, const HomAlgebroid& L, const MForm& w, const MForm& t);

/// Scalar p-form from dense coordinates (tuple-major, monomials up to degree k).
SForm sform_from_coords(const HomAlgebroid& L, int p, int k, const QVec& v);
QVec sform_coords(const SForm& w, int k);
/// Matrix of d_L from p-forms to (p+1)-forms on coefficients of degree <= k. Cached per algebroid.
const QMatrix& dL_matrix(const HomAlgebroid& L, int p, int k);

}  // namespace homalg
