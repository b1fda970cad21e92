#pragma once

#include <memory>

#include "homalg/polymatrix.hpp"

namespace homalg {

/// Trivialized Hom-bundle of rank r with phi_E(s) = PhiE * phi*(s).
class HomBundle {
 public:
  HomBundle(std::shared_ptr<const Base> base, PolyMatrix phiE);

  const Base& base() const { return *base_; }
  std::shared_ptr<const Base> base_ptr() const { return base_; }
  int rank() const { return r_; }
  const PolyMatrix& phiE_matrix() const { return phiE_; }
  Twisted phiE() const { return Twisted{phiE_, 1}; }
  Twisted phiE_inv() const { return phiE_inv_; }

  /// Constant basis section b_k.
  Vec basis_section(int k) const { return basis_vec(*base_, r_, k); }
  /// Sections x^e b_k over all monomials and k.
  std::vector<Vec> monomial_sections() const;

 private:
  std::shared_ptr<const Base> base_;
  int r_;
  PolyMatrix phiE_;
  Twisted phiE_inv_;
};

using Section = Vec;

Section twisted_apply(const HomBundle& E, const TwistedMor& psi, const Section& s);
/// phi_E o psi o phi_E^{-1}.
Twisted ad_phiE(const HomBundle& E, const Twisted& psi);
/// phi_E^{-1} o psi o phi_E.
Twisted ad_phiE_inv(const HomBundle& E, const Twisted& psi);
/// psi o phi_E == phi_E o psi on all monomial sections.
bool in_end_phiE(const HomBundle& E, const Twisted& psi, int loss = 0);

}  // namespace homalg
