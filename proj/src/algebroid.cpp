#include "homalg/algebroid.hpp"

namespace homalg {

HomAlgebroid::HomAlgebroid(std::shared_ptr<const Base> base, PolyMatrix phiL, PolyMatrix anchor, Structure c)
    : base_(std::move(base)), n_(phiL.rows()), phiL_(std::move(phiL)), anchor_(std::move(anchor)), c_(std::move(c)) {
  int m = base_->vars(), d = base_->order();
  if (phiL_.cols() != n_) throw ShapeError("phiL must be square");
  if (anchor_.rows() != m || anchor_.cols() != n_) throw ShapeError("anchor must be m x n");
  if (static_cast<int>(c_.size()) != n_) throw ShapeError("structure: need n outer entries");
  for (const auto& ck : c_) {
    if (static_cast<int>(ck.size()) != n_) throw ShapeError("structure: need n x n per k");
    for (const auto& row : ck)
      if (static_cast<int>(row.size()) != n_) throw ShapeError("structure: need n x n per k");
  }
  for (const auto& ck : c_)
    for (const auto& row : ck)
      for (const auto& f : row)
        if (f.vars() != m || f.order() != d) throw ShapeError("structure function shape");
  phiL_inv_ = phiL_.inverse();
  for (int i = 0; i < n_; ++i) {
    Vec col(n_, base_->zero()), icol(n_, base_->zero());
    for (int k = 0; k < n_; ++k) {
      col[k] = phiL_(k, i);
      icol[k] = phiL_inv_(k, i);
    }
    phiL_cols_.push_back(col);
    phiL_inv_cols_.push_back(pull(*base_, icol, -1));
  }
}

bool HomAlgebroid::transitive() const {
  return homalg::rank(anchor_.constant_part()) == base_->vars();
}

LSection phiL_apply(const HomAlgebroid& L, const LSection& xi) {
  return L.phiL_matrix() * pull(L.base(), xi, 1);
}

LSection phiL_inv_apply(const HomAlgebroid& L, const LSection& xi) {
  LSection out = L.zero_section();
  for (int i = 0; i < L.rank(); ++i)
    if (!xi[i].is_zero()) out = out + scale(L.base().pull(xi[i], -1), L.phiL_inv_basis(i));
  return out;
}

JetPoly anchor_act(const HomAlgebroid& L, const LSection& xi, const JetPoly& f) {
  const Base& b = L.base();
  JetPoly out = b.zero();
  int m = b.vars();
  if (static_cast<int>(xi.size()) != L.rank()) throw ShapeError("anchor_act: section rank");
  for (int i = 0; i < m; ++i) {
    JetPoly coef = b.zero();
    for (int j = 0; j < L.rank(); ++j)
      if (!xi[j].is_zero()) coef += xi[j] * L.anchor_matrix()(i, j);
    if (coef.is_zero()) {
      out = out.with_valid(std::min(out.valid(), f.valid() - 1));
      continue;
    }
    out += coef * b.pull(jet_partial(i, f));
  }
  if (m == 0) return out.with_valid(f.valid());
  return out;
}

LSection bracket(const HomAlgebroid& L, const LSection& xi, const LSection& eta) {
  const Base& b = L.base();
  int n = L.rank();
  if (static_cast<int>(xi.size()) != n || static_cast<int>(eta.size()) != n) throw ShapeError("bracket: section rank");
  LSection out = L.zero_section();
  for (int i = 0; i < n; ++i) {
    if (xi[i].is_zero()) continue;
    JetPoly pf = b.pull(xi[i]);
    for (int j = 0; j < n; ++j) {
      if (eta[j].is_zero()) continue;
      JetPoly pg = b.pull(eta[j]);
      JetPoly pfg = pf * pg;
      for (int k = 0; k < n; ++k) out[k] += pfg * L.c(k, i, j);
      out = out + scale(pf * anchor_act(L, L.phiL_basis(i), eta[j]), L.phiL_basis(j));
      out = out - scale(pg * anchor_act(L, L.phiL_basis(j), xi[i]), L.phiL_basis(i));
    }
  }
  return out;
}

JetPoly phi_dagger_eval(const HomAlgebroid& L, const SForm& w, const std::vector<LSection>& ys) {
  std::vector<LSection> pre;
  for (const auto& y : ys) pre.push_back(phiL_inv_apply(L, y));
  return L.base().pull(w.eval(pre));
}

SForm phi_dagger_apply(const HomAlgebroid& L, const SForm& w) {
  SForm out(w.n, w.p, L.base().zero());
  for (const auto& I : tuples(w.n, w.p)) {
    std::vector<LSection> ys;
    for (int i : I) ys.push_back(L.basis(i));
    out[I] = phi_dagger_eval(L, w, ys);
  }
  return out;
}

SForm lie_derivative(const HomAlgebroid& L, const LSection& xi, const SForm& w) {
  SForm out(w.n, w.p, L.base().zero());
  LSection pxi = phiL_apply(L, xi);
  for (const auto& I : tuples(w.n, w.p)) {
    std::vector<LSection> pre;
    for (int i : I) pre.push_back(L.phiL_inv_basis(i));
    JetPoly v = anchor_act(L, pxi, w.eval(pre));
    for (int k = 0; k < w.p; ++k) {
      std::vector<LSection> args;
      for (int i : I) args.push_back(L.basis(i));
      args[k] = bracket(L, xi, L.phiL_inv_basis(I[k]));
      v -= phi_dagger_eval(L, w, args);
    }
    out[I] = v;
  }
  return out;
}

SForm insertion(const HomAlgebroid& L, const LSection& xi, const SForm& w) {
  if (w.p < 1) throw DegreeError("insertion into a degree-0 form");
  SForm out(w.n, w.p - 1, L.base().zero());
  LSection pxi = phiL_apply(L, xi);
  for (const auto& J : tuples(w.n, w.p - 1)) {
    std::vector<LSection> args{pxi};
    for (int j : J) args.push_back(L.basis(j));
    out[J] = phi_dagger_eval(L, w, args);
  }
  return out;
}

ValidationReport validate_algebroid(const HomAlgebroid& L, const AlgebroidLosses& losses) {
  const Base& b = L.base();
  int n = L.rank(), d = b.order();
  ValidationReport rep;
  auto tag = [](std::initializer_list<int> ids) {
    std::string s = "(";
    bool first = true;
    for (int i : ids) {
      s += (first ? "" : ",") + std::to_string(i);
      first = false;
    }
    return s + ")";
  };

  {
    Tally t("skew", d);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.compare(L.c(k, i, j), -L.c(k, j, i), 0, "c" + tag({k, i, j}));
    for (int i = 0; i < n; ++i) t.compare(bracket(L, L.basis(i), L.basis(i)), L.zero_section(), 0, "[e,e]" + tag({i}));
    rep.entries.push_back(t.result());
  }
  {
    Tally t("phiL_morphism", d - losses.bracket);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        t.compare(phiL_apply(L, bracket(L, L.basis(i), L.basis(j))),
                  bracket(L, L.phiL_basis(i), L.phiL_basis(j)), losses.bracket, tag({i, j}));
    rep.entries.push_back(t.result());
  }
  {
    Tally t("hom_jacobi", d - losses.jacobi);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          LSection x = L.basis(i), y = L.basis(j), z = L.basis(k);
          LSection s = bracket(L, phiL_apply(L, x), bracket(L, y, z)) +
                       bracket(L, phiL_apply(L, y), bracket(L, z, x)) +
                       bracket(L, phiL_apply(L, z), bracket(L, x, y));
          t.compare(s, L.zero_section(), losses.jacobi, tag({i, j, k}));
        }
    rep.entries.push_back(t.result());
  }
  {
    Tally t("leibniz", d - losses.bracket);
    std::vector<JetPoly> gs{b.one()};
    for (int v = 0; v < b.vars(); ++v) gs.push_back(JetPoly::var(b.vars(), d, v));
    for (int i = 0; i < n; ++i)
      for (const auto& g : gs)
        for (int j = 0; j < n; ++j)
          for (const auto& e : b.basis()) {
            JetPoly f = JetPoly::monomial(b.vars(), d, e);
            LSection x = scale(g, L.basis(i)), y = L.basis(j);
            LSection lhs = bracket(L, x, scale(f, y));
            LSection rhs = scale(b.pull(f), bracket(L, x, y)) +
                           scale(anchor_act(L, phiL_apply(L, x), f), phiL_apply(L, y));
            t.compare(lhs, rhs, losses.bracket, "x=" + to_string(g) + "*e" + std::to_string(i) + ",f=" + to_string(f));
          }
    rep.entries.push_back(t.result());
  }
  {
    Tally t("representation_twist", d - losses.representation);
    for (const auto& e : b.basis()) {
      JetPoly f = JetPoly::monomial(b.vars(), d, e);
      for (int i = 0; i < n; ++i)
        t.compare(anchor_act(L, L.phiL_basis(i), b.pull(f)), b.pull(anchor_act(L, L.basis(i), f)),
                  losses.representation, "e" + std::to_string(i) + ",f=" + to_string(f));
    }
    rep.entries.push_back(t.result());
  }
  {
    Tally t("representation_bracket", d - losses.representation);
    for (const auto& e : b.basis()) {
      JetPoly f = JetPoly::monomial(b.vars(), d, e);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          JetPoly lhs = anchor_act(L, bracket(L, L.basis(i), L.basis(j)), b.pull(f));
          JetPoly rhs = anchor_act(L, L.phiL_basis(i), anchor_act(L, L.basis(j), f)) -
                        anchor_act(L, L.phiL_basis(j), anchor_act(L, L.basis(i), f));
          t.compare(lhs, rhs, losses.representation, tag({i, j}) + ",f=" + to_string(f));
        }
    }
    rep.entries.push_back(t.result());
  }
  return rep;
}

}  // namespace homalg
