#pragma once

#include <optional>

#include "homalg/connection.hpp"

namespace homalg {

// Coefficient coordinates. A twisted morphism is read row-major over its matrix entries,
// each entry as monomial coefficients up to degree k; a 1-form concatenates its components.
QVec twisted_coords(const Twisted& t, int k);
Twisted twisted_from_coords(const HomBundle& E, int k, const QVec& v, int twist = 1, std::size_t offset = 0);
QVec mform_coords(const MForm& w, int k);
MForm mform_from_coords(const HomBundle& E, int n, int p, int k, const QVec& v, int twist = 1);
std::size_t twisted_dim(const HomBundle& E, int k);

/// Working order d - loss, never below 0.
int working_order(const Base& b, int loss);

/// Coordinates (degree <= k) of a basis of End_phiE(E): T o phi_E = phi_E o T on the frame.
std::vector<QVec> end_phiE_basis(const HomBundle& E, int k);
/// Matrix of T -> (T o phi_E - phi_E o T) on the frame, degree <= k on both sides.
QMatrix end_phiE_condition(const HomBundle& E, int k);

bool is_gauge_element(const HomBundle& E, const Twisted& psi, int loss = 0);
/// psi1 o phi_E^{-1} o psi2.
Twisted gauge_mul(const HomBundle& E, const Twisted& psi1, const Twisted& psi2);
/// phi_E o psi^{-1} o phi_E.
Twisted gauge_inv(const HomBundle& E, const Twisted& psi);

/// (id (x) phi_E psi^{-1}) nabla(phi_E^{-1} psi s), straight from the definition.
EForm gauge_act_eval(const Connection& c, const Twisted& psi, const Section& s);
/// nabla^psi = nabla_0 + alpha^psi, alpha^psi read off on the constant frame.
Connection gauge_act(const Twisted& psi, const Connection& c);
/// alpha^psi from the closed form through nabla_0^End(psi).
MForm gauge_alpha_closed_form(const Twisted& psi, const Connection& c);
/// Equality of connections: equal twist and alpha budget-equal at the given loss.
bool same_connection(const Connection& a, const Connection& b, int loss = 1);

struct EndKernel {
  int order = 0;                      // working order of the computation
  std::vector<Twisted> basis;         // kernel on full End(E)
  std::vector<Twisted> phiE_basis;    // kernel intersected with End_phiE(E)
  std::vector<QVec> coords;           // coordinates of `basis`
  std::vector<QVec> phiE_coords;
};

/// Matrix of T -> nabla^End(T) on full End(E), degree <= k in and out.
QMatrix end_connection_matrix(const Connection& c, int k);
EndKernel end_kernel(const Connection& c, int loss = 1);
bool is_irreducible(const Connection& c, int loss = 1);

struct IsotropySearch {
  bool feasible = false;
  int pool_dim = 0;
  int candidates = 0;
  std::vector<Twisted> fixers;
  bool scalars_only = false;  // every fixer is a multiple of phi_E
};

/// Enumerates combinations with coefficients in {-1, 0, 1, 2} of an End_phiE basis
/// (or of the End_phiE part of the kernel when the former is too large) and keeps
/// the invertible ones fixing the connection.
IsotropySearch brute_force_isotropy(const Connection& c, int max_dim = 4, int loss = 1);

/// Solution basis of { psi in End_phiE : nabla_1(phi_E^{-1} psi s) = psi phi_E^{-1} nabla_2(s) }.
std::vector<Twisted> orbit_solutions(const Connection& c1, const Connection& c2, int loss = 1);
/// An invertible solution verified by re-acting, if one is found.
std::optional<Twisted> find_gauge_transform(const Connection& c1, const Connection& c2, int loss = 1);

}  // namespace homalg
