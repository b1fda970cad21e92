#pragma once

#include <memory>

#include "homalg/cedram.hpp"

namespace homalg {

/// nabla = nabla_0 + alpha, with alpha(s)(e_j) = A_j * (phi*)^twist(s).
struct Connection {
  std::shared_ptr<const HomBundle> E;
  std::shared_ptr<const HomAlgebroid> L;
  std::vector<PolyMatrix> A;
  int twist = 1;

  const Base& base() const { return E->base(); }
};

Connection trivial_connection(std::shared_ptr<const HomBundle> E, std::shared_ptr<const HomAlgebroid> L);
/// alpha as an End(E)-valued 1-form.
MForm alpha_form(const Connection& c);
Connection with_alpha(const Connection& c, const MForm& alpha);

/// (nabla s)(e_j).
Section conn_at(const Connection& c, const Section& s, int j);
EForm conn_apply(const Connection& c, const Section& s);
/// nabla_xi(s) = (nabla s)(phi_L xi).
Section covariant_derivative(const Connection& c, const LSection& xi, const Section& s);

/// phi_E(w(phi_L^{-1} y_1, ...)).
Section phi_twist_eval(const HomBundle& E, const HomAlgebroid& L, const EForm& w, const std::vector<LSection>& ys);
EForm phi_twist(const HomBundle& E, const HomAlgebroid& L, const EForm& w);
EForm phi_twist_inv(const HomBundle& E, const HomAlgebroid& L, const EForm& w);
/// Same operation on End(E)-valued forms: X(e_I) -> phi_E o X(phi_L^{-1} e_I).
MForm phi_twist(const HomBundle& E, const HomAlgebroid& L, const MForm& w);
MForm phi_twist_inv(const HomBundle& E, const HomAlgebroid& L, const MForm& w);

EForm d_nabla(const Connection& c, const EForm& w);

/// The defining two-term expression of nabla^End(T), evaluated on one section.
EForm end_connection_eval(const Connection& c, const Twisted& T, const Section& s);
/// nabla^End(T) as an End(E)-valued 1-form, read off on the constant frame.
MForm end_connection_apply(const Connection& c, const Twisted& T);
/// ad(alpha)(T)(e_j) = [alpha(phi_L^{-1} e_j), T].
MForm ad_alpha(const Connection& c, const Twisted& T);

/// Checks: connection_leibniz, connection_phi, difference_linear.
ValidationReport validate_connection(const Connection& c, int loss = 1);

}  // namespace homalg
