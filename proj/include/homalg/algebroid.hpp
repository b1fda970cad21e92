#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "homalg/bundle.hpp"
#include "homalg/check.hpp"
#include "homalg/forms.hpp"

namespace homalg {

/// Structure functions c[k][i][j]: [e_i, e_j] = sum_k c[k][i][j] e_k.
using Structure = std::vector<std::vector<std::vector<JetPoly>>>;

/// Rank-n Hom-Lie algebroid on a trivial bundle.
/// Anchor: a_L(e_j) = sum_i rho(i, j) (d/dx_i)^!, acting by f -> rho(i, j) phi*(d_i f).
class HomAlgebroid {
 public:
  HomAlgebroid(std::shared_ptr<const Base> base, PolyMatrix phiL, PolyMatrix anchor, Structure c);

  const Base& base() const { return *base_; }
  std::shared_ptr<const Base> base_ptr() const { return base_; }
  int rank() const { return n_; }
  const PolyMatrix& phiL_matrix() const { return phiL_; }
  const PolyMatrix& anchor_matrix() const { return anchor_; }
  const JetPoly& c(int k, int i, int j) const { return c_[k][i][j]; }
  const Structure& structure() const { return c_; }

  Vec basis(int i) const { return basis_vec(*base_, n_, i); }
  Vec zero_section() const { return zero_vec(*base_, n_); }
  /// phi_L(e_i), column i of PhiL.
  const Vec& phiL_basis(int i) const { return phiL_cols_[i]; }
  /// phi_L^{-1}(e_i).
  const Vec& phiL_inv_basis(int i) const { return phiL_inv_cols_[i]; }

  /// Constant part of the anchor has rank m.
  bool transitive() const;

  /// Write-once cache for matrixized operators, keyed by name and integers.
  template <class F>
  const QMatrix& cached(const std::string& key, F build) const {
    {
      std::lock_guard<std::mutex> lock(*mu_);
      auto it = cache_->find(key);
      if (it != cache_->end()) return it->second;
    }
    QMatrix m = build();
    std::lock_guard<std::mutex> lock(*mu_);
    return cache_->emplace(key, std::move(m)).first->second;
  }

 private:
  std::shared_ptr<const Base> base_;
  int n_;
  PolyMatrix phiL_;
  PolyMatrix phiL_inv_;
  PolyMatrix anchor_;
  Structure c_;
  std::vector<Vec> phiL_cols_;
  std::vector<Vec> phiL_inv_cols_;
  std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
  std::shared_ptr<std::map<std::string, QMatrix>> cache_ = std::make_shared<std::map<std::string, QMatrix>>();
};

using LSection = Vec;

LSection phiL_apply(const HomAlgebroid& L, const LSection& xi);
LSection phiL_inv_apply(const HomAlgebroid& L, const LSection& xi);

JetPoly anchor_act(const HomAlgebroid& L, const LSection& xi, const JetPoly& f);
LSection bracket(const HomAlgebroid& L, const LSection& xi, const LSection& eta);

/// phi^dagger on scalar forms: phi*(w(phi_L^{-1} Y_1, ...)).
SForm phi_dagger_apply(const HomAlgebroid& L, const SForm& w);
/// phi^dagger(w) evaluated on arbitrary sections.
JetPoly phi_dagger_eval(const HomAlgebroid& L, const SForm& w, const std::vector<LSection>& ys);

SForm lie_derivative(const HomAlgebroid& L, const LSection& xi, const SForm& w);
/// Throws DegreeError for degree 0.
SForm insertion(const HomAlgebroid& L, const LSection& xi, const SForm& w);

struct AlgebroidLosses {
  int bracket = 1;
  int jacobi = 2;
  int representation = 2;
};

/// Checks: skew, phiL_morphism, hom_jacobi, leibniz, representation_twist, representation_bracket.
ValidationReport validate_algebroid(const HomAlgebroid& L, const AlgebroidLosses& losses = {});

}  // namespace homalg
