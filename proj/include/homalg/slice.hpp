#pragma once

#include <string>

#include "homalg/gauge.hpp"

namespace homalg {

enum class Subspace { Full, PhiE };
Subspace parse_subspace(const std::string& s);
std::string to_string(Subspace s);

/// A graded coefficient space: E- or End(E)-valued p-forms with coefficients of degree <= order.
/// For PhiE the coordinates are those of `basis` (columns in ambient coordinates).
struct SpaceSpec {
  std::string module;  // "E" or "End"
  int degree = 0;
  Subspace subspace = Subspace::Full;
  int order = 0;
  std::vector<QVec> basis;
  std::size_t ambient_dim = 0;
  std::size_t dim() const { return basis.size(); }
};

struct LinOperator {
  std::string name;
  SpaceSpec dom;
  SpaceSpec cod;
  QMatrix M;
  int loss = 0;
  bool closed = true;  // image of dom lies in cod (always true for Full)
};

/// Ambient coordinate dimension of the space and, for PhiE, the subspace basis.
SpaceSpec space_spec(const HomBundle& E, const HomAlgebroid& L, const std::string& module, int degree, Subspace sub, int order);
/// X -> phi_twist(X) - X o phi_E on End-valued p-forms (degree 0: phi_E T - T phi_E).
QMatrix end_phiE_form_condition(const HomBundle& E, const HomAlgebroid& L, int p, int k);

/// Names: d_nabla, end_connection, ad_alpha, phi_twists. Throws std::invalid_argument on other names.
/// On End-valued forms d_nabla is the End connection and needs degree 0; on E-valued forms it is d^nabla.
LinOperator operator_matrix(const std::string& name, const Connection& c, int degree, Subspace sub, int loss = 1,
                            const std::string& module = "End");
/// Operator with the adjoint for the coordinate inner product (transpose).
LinOperator adjoint(const LinOperator& op);
LinOperator compose(const LinOperator& a, const LinOperator& b);

/// Delta = D^T D for D = d_nabla on End-valued 0-forms.
LinOperator laplacian(const Connection& c, Subspace sub, int loss = 1);

struct Decomposition {
  QVec alpha;  // coordinates in the degree-1 space
  QVec beta;   // degree-0 coordinates, orthogonal to ker Delta
  QVec gamma;  // degree-1 coordinates, in ker D^T
  Twisted beta_map;
  MForm gamma_form;
};

/// alpha = D beta + gamma with D^T gamma = 0.
Decomposition coulomb_decompose(const Connection& c, const MForm& alpha, Subspace sub, int loss = 1);
/// Same, from coordinates in the degree-1 space of `sub`.
Decomposition coulomb_decompose_coords(const Connection& c, const QVec& alpha, Subspace sub, int loss = 1);

/// Coordinates of an ambient vector in a subspace basis; nullopt if outside the span.
std::optional<QVec> subspace_coords(const std::vector<QVec>& basis, const QVec& v);

int slice_dimension(const Connection& c, int loss = 1);
/// Complement of the phi_E line in End_phiE 0-forms, in subspace coordinates.
std::vector<QVec> gau0_basis(const Connection& c, int loss = 1);

struct SliceCheck {
  int domain_dim = 0;
  int target_dim = 0;
  int rank = 0;
  bool injective = false;
  bool surjective = false;
  bool closed = true;
  bool bijective() const { return injective && surjective; }
};

/// d(Psi) = [D G | K1] from gau0 (+) ker D^T onto the End_phiE 1-forms.
SliceCheck local_slice_check(const Connection& c, int loss = 1);

struct MetricH {
  PolyMatrix H;
};

/// Symmetric, constant part positive definite.
bool metric_well_formed(const MetricH& h);
/// Phi_E^T H Phi_E == phi*(H).
bool validate_hom_metric(const HomBundle& E, const MetricH& h);

}  // namespace homalg
