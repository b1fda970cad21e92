#include "homalg/bundle.hpp"

namespace homalg {

HomBundle::HomBundle(std::shared_ptr<const Base> base, PolyMatrix phi_e)
    : base_(std::move(base)), r_(phi_e.rows()), phiE_(std::move(phi_e)) {
  if (phiE_.rows() != phiE_.cols()) throw ShapeError("phiE must be square");
  if (phiE_.vars() != base_->vars() || phiE_.order() != base_->order()) throw ShapeError("phiE shape");
  phiE_inv_ = inverse(*base_, Twisted{phiE_, 1});
}

std::vector<Vec> HomBundle::monomial_sections() const {
  std::vector<Vec> out;
  for (int k = 0; k < r_; ++k)
    for (const auto& e : base_->basis()) {
      Vec s = zero_vec(*base_, r_);
      s[k] = JetPoly::monomial(base_->vars(), base_->order(), e);
      out.push_back(std::move(s));
    }
  return out;
}

Section twisted_apply(const HomBundle& E, const TwistedMor& psi, const Section& s) {
  if (psi.M.rows() != E.rank() || static_cast<int>(s.size()) != E.rank()) throw ShapeError("twisted_apply shape");
  return apply(E.base(), psi, s);
}

Twisted ad_phiE(const HomBundle& E, const Twisted& psi) {
  const Base& b = E.base();
  return compose(b, compose(b, E.phiE(), psi), E.phiE_inv());
}

Twisted ad_phiE_inv(const HomBundle& E, const Twisted& psi) {
  const Base& b = E.base();
  return compose(b, compose(b, E.phiE_inv(), psi), E.phiE());
}

bool in_end_phiE(const HomBundle& E, const Twisted& psi, int loss) {
  const Base& b = E.base();
  Twisted phiE = E.phiE();
  for (const auto& s : E.monomial_sections()) {
    Vec lhs = apply(b, psi, apply(b, phiE, s));
    Vec rhs = apply(b, phiE, apply(b, psi, s));
    if (!budget_eq(lhs, rhs, loss)) return false;
  }
  return true;
}

}  // namespace homalg
