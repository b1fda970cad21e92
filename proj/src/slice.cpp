#include "homalg/slice.hpp"

#include <stdexcept>

namespace homalg {

namespace {

std::size_t block(const Base& b, int k) { return monomials(b.vars(), std::min(k, b.order())).size(); }

QMatrix columns(std::size_t rows, const std::vector<QVec>& cols) {
  return QMatrix::from_columns(static_cast<int>(rows), cols);
}

std::vector<QVec> unit_basis(std::size_t dim) {
  std::vector<QVec> out;
  for (std::size_t i = 0; i < dim; ++i) {
    QVec e(dim);
    e[i] = 1;
    out.push_back(e);
  }
  return out;
}

QVec eform_coords(const EForm& w, int k) {
  QVec out;
  for (const auto& v : w.c)
    for (const auto& f : v) {
      QVec c = f.coords(k);
      out.insert(out.end(), c.begin(), c.end());
    }
  return out;
}

EForm eform_from_coords(const HomBundle& E, int n, int p, int k, const QVec& v) {
  const Base& b = E.base();
  EForm w(n, p, zero_vec(b, E.rank()));
  std::size_t blk = block(b, k), pos = 0;
  for (auto& s : w.c)
    for (auto& f : s) {
      f = JetPoly::from_coords(b.vars(), b.order(), k, v, pos);
      pos += blk;
    }
  return w;
}

std::size_t ambient(const HomBundle& E, const HomAlgebroid& L, const std::string& module, int p, int k) {
  std::size_t t = tuples(L.rank(), p).size();
  if (module == "E") return t * E.rank() * block(E.base(), k);
  return t * twisted_dim(E, k);
}

QVec combine(const std::vector<QVec>& basis, const QVec& coef, std::size_t dim) {
  QVec out(dim);
  for (std::size_t i = 0; i < basis.size(); ++i) out = axpy(coef[i], basis[i], out);
  return out;
}

QVec apply_named(const std::string& name, const Connection& c, const std::string& module, int p, int k, const QVec& x) {
  const HomBundle& E = *c.E;
  const HomAlgebroid& L = *c.L;
  int n = L.rank();
  if (module == "E") {
    EForm w = eform_from_coords(E, n, p, k, x);
    if (name == "d_nabla") return eform_coords(d_nabla(c, w), k);
    if (name == "phi_twists") return eform_coords(phi_twist(E, L, w), k);
    throw std::invalid_argument("operator '" + name + "' does not act on E-valued forms");
  }
  MForm w = mform_from_coords(E, n, p, k, x);
  if (name == "phi_twists") return mform_coords(phi_twist(E, L, w), k);
  if (p != 0) throw DegreeError("operator '" + name + "' is defined on End-valued 0-forms only");
  Twisted T = w.c[0];
  if (name == "d_nabla" || name == "end_connection") return mform_coords(end_connection_apply(c, T), k);
  if (name == "ad_alpha") return mform_coords(ad_alpha(c, T), k);
  throw std::invalid_argument("unknown operator '" + name + "'");
}

}  // namespace

Subspace parse_subspace(const std::string& s) {
  if (s == "full") return Subspace::Full;
  if (s == "phiE") return Subspace::PhiE;
  throw std::invalid_argument("subspace must be full or phiE, got '" + s + "'");
}

std::string to_string(Subspace s) { return s == Subspace::Full ? "full" : "phiE"; }

QMatrix end_phiE_form_condition(const HomBundle& E, const HomAlgebroid& L, int p, int k) {
  const Base& b = E.base();
  int n = L.rank();
  std::size_t dim = ambient(E, L, "End", p, k);
  std::vector<QVec> cols;
  for (std::size_t j = 0; j < dim; ++j) {
    QVec e(dim);
    e[j] = 1;
    MForm x = mform_from_coords(E, n, p, k, e);
    MForm lhs = phi_twist(E, L, x);
    MForm rhs = x;
    for (auto& t : rhs.c) t = compose(b, t, E.phiE());
    rhs.zero.twist += 1;
    cols.push_back(mform_coords(lhs - rhs, k));
  }
  return columns(dim, cols);
}

SpaceSpec space_spec(const HomBundle& E, const HomAlgebroid& L, const std::string& module, int degree, Subspace sub, int order) {
  if (module != "E" && module != "End") throw std::invalid_argument("module must be E or End");
  if (module == "E" && sub == Subspace::PhiE) throw std::invalid_argument("the phiE subspace applies to End-valued forms");
  SpaceSpec s;
  s.module = module;
  s.degree = degree;
  s.subspace = sub;
  s.order = order;
  s.ambient_dim = ambient(E, L, module, degree, order);
  if (sub == Subspace::Full || s.ambient_dim == 0)
    s.basis = unit_basis(s.ambient_dim);
  else
    s.basis = nullspace(end_phiE_form_condition(E, L, degree, order));
  return s;
}

std::optional<QVec> subspace_coords(const std::vector<QVec>& basis, const QVec& v) {
  if (basis.empty()) return is_zero(v) ? std::optional<QVec>(QVec{}) : std::nullopt;
  return solve(columns(v.size(), basis), v);
}

LinOperator operator_matrix(const std::string& name, const Connection& c, int degree, Subspace sub, int loss,
                            const std::string& module) {
  if (name != "d_nabla" && name != "end_connection" && name != "ad_alpha" && name != "phi_twists")
    throw std::invalid_argument("unknown operator '" + name + "'");
  const HomBundle& E = *c.E;
  const HomAlgebroid& L = *c.L;
  int k = working_order(E.base(), loss);
  int cod_degree = name == "phi_twists" ? degree : degree + 1;
  LinOperator op;
  op.name = name;
  op.loss = name == "phi_twists" ? 0 : loss;
  op.dom = space_spec(E, L, module, degree, sub, k);
  op.cod = space_spec(E, L, module, cod_degree, sub, k);
  op.M = QMatrix(static_cast<int>(op.cod.dim()), static_cast<int>(op.dom.dim()));
  for (std::size_t j = 0; j < op.dom.dim(); ++j) {
    QVec img = apply_named(name, c, module, degree, k, op.dom.basis[j]);
    auto y = sub == Subspace::Full ? std::optional<QVec>(img) : subspace_coords(op.cod.basis, img);
    if (!y) {
      op.closed = false;
      continue;
    }
    for (std::size_t i = 0; i < y->size(); ++i) op.M(static_cast<int>(i), static_cast<int>(j)) = (*y)[i];
  }
  return op;
}

LinOperator adjoint(const LinOperator& op) {
  LinOperator a = op;
  a.name = op.name + "*";
  std::swap(a.dom, a.cod);
  a.M = op.M.transpose();
  return a;
}

LinOperator compose(const LinOperator& a, const LinOperator& b) {
  if (a.dom.dim() != b.cod.dim()) throw ShapeError("operator composition: dimension mismatch");
  LinOperator r;
  r.name = a.name + "." + b.name;
  r.dom = b.dom;
  r.cod = a.cod;
  r.M = a.M * b.M;
  r.loss = a.loss + b.loss;
  r.closed = a.closed && b.closed;
  return r;
}

LinOperator laplacian(const Connection& c, Subspace sub, int loss) {
  LinOperator D = operator_matrix("d_nabla", c, 0, sub, loss);
  LinOperator L = compose(adjoint(D), D);
  L.name = "laplacian";
  return L;
}

Decomposition coulomb_decompose_coords(const Connection& c, const QVec& alpha, Subspace sub, int loss) {
  LinOperator D = operator_matrix("d_nabla", c, 0, sub, loss);
  if (alpha.size() != D.cod.dim()) throw ShapeError("coulomb_decompose: alpha has wrong dimension");
  QMatrix Dt = D.M.transpose();
  QMatrix delta = Dt * D.M;
  std::vector<QVec> ker = nullspace(D.M);
  int n0 = static_cast<int>(D.dom.dim());
  QMatrix sys = delta;
  QVec rhs = Dt * alpha;
  if (!ker.empty()) {
    QMatrix N = columns(n0, ker).transpose();
    sys = QMatrix::vcat(delta, N);
    rhs.resize(rhs.size() + ker.size());
  }
  Decomposition out;
  out.alpha = alpha;
  if (n0 == 0) {
    out.beta = {};
  } else {
    auto beta = solve(sys, rhs);
    if (!beta) throw std::logic_error("normal equations inconsistent");
    out.beta = *beta;
  }
  QVec dbeta = n0 == 0 ? QVec(alpha.size()) : D.M * out.beta;
  out.gamma = alpha;
  for (std::size_t i = 0; i < alpha.size(); ++i) out.gamma[i] -= dbeta[i];
  const HomBundle& E = *c.E;
  out.beta_map = twisted_from_coords(E, D.dom.order, combine(D.dom.basis, out.beta, D.dom.ambient_dim));
  out.gamma_form = mform_from_coords(E, c.L->rank(), 1, D.cod.order, combine(D.cod.basis, out.gamma, D.cod.ambient_dim));
  return out;
}

Decomposition coulomb_decompose(const Connection& c, const MForm& alpha, Subspace sub, int loss) {
  int k = working_order(c.base(), loss);
  SpaceSpec s1 = space_spec(*c.E, *c.L, "End", 1, sub, k);
  auto a = subspace_coords(s1.basis, mform_coords(alpha, k));
  if (!a) throw std::invalid_argument("alpha is not in the requested subspace");
  return coulomb_decompose_coords(c, *a, sub, loss);
}

int slice_dimension(const Connection& c, int loss) {
  LinOperator D = operator_matrix("d_nabla", c, 0, Subspace::PhiE, loss);
  return static_cast<int>(D.cod.dim()) - rank(D.M);
}

std::vector<QVec> gau0_basis(const Connection& c, int loss) {
  int k = working_order(c.base(), loss);
  SpaceSpec s0 = space_spec(*c.E, *c.L, "End", 0, Subspace::PhiE, k);
  if (s0.dim() == 0) return {};
  auto id = subspace_coords(s0.basis, twisted_coords(c.E->phiE(), k));
  if (!id) throw std::logic_error("phi_E outside End_phiE");
  QMatrix row = QMatrix::from_columns(static_cast<int>(id->size()), {*id}).transpose();
  return nullspace(row);
}

SliceCheck local_slice_check(const Connection& c, int loss) {
  LinOperator D = operator_matrix("d_nabla", c, 0, Subspace::PhiE, loss);
  std::vector<QVec> G = gau0_basis(c, loss);
  std::vector<QVec> K1 = nullspace(D.M.transpose());
  std::size_t n1 = D.cod.dim();
  std::vector<QVec> cols;
  for (const auto& g : G) cols.push_back(D.M * g);
  for (const auto& v : K1) cols.push_back(v);
  SliceCheck out;
  out.closed = D.closed;
  out.domain_dim = static_cast<int>(cols.size());
  out.target_dim = static_cast<int>(n1);
  out.rank = cols.empty() ? 0 : rank(columns(n1, cols));
  out.injective = out.rank == out.domain_dim;
  out.surjective = out.rank == out.target_dim;
  return out;
}

bool metric_well_formed(const MetricH& h) {
  const PolyMatrix& H = h.H;
  if (H.rows() != H.cols()) return false;
  if (!(H == H.transpose())) return false;
  QMatrix c = H.constant_part();
  for (int k = 1; k <= c.rows(); ++k) {
    QMatrix minor(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) minor(i, j) = c(i, j);
    if (det(minor) <= 0) return false;
  }
  return true;
}

bool validate_hom_metric(const HomBundle& E, const MetricH& h) {
  if (h.H.rows() != E.rank()) throw ShapeError("metric rank differs from bundle rank");
  const PolyMatrix& P = E.phiE_matrix();
  return P.transpose() * h.H * P == h.H.pulled(E.base());
}

}  // namespace homalg
