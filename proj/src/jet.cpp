#include "homalg/jet.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <numeric>

namespace homalg {

bool MonoLess::operator()(const Mono& a, const Mono& b) const {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return a > b;
}

int total_degree(const Mono& e) { return std::accumulate(e.begin(), e.end(), 0); }

namespace {

void enumerate(int m, int left, Mono& cur, int pos, std::vector<Mono>& out) {
  if (pos == m) {
    out.push_back(cur);
    return;
  }
  for (int k = left; k >= 0; --k) {
    cur[pos] = k;
    enumerate(m, left - k, cur, pos + 1, out);
  }
  cur[pos] = 0;
}

struct MonoTable {
  std::vector<Mono> list;
  std::map<Mono, int> index;
};

const MonoTable& table(int m, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, MonoTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(m, std::max(d, -1));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  MonoTable t;
  for (int deg = 0; deg <= d; ++deg) {
    Mono cur(m, 0);
    std::vector<Mono> layer;
    enumerate(m, deg, cur, 0, layer);
    for (auto& e : layer)
      if (total_degree(e) == deg) t.list.push_back(e);
    if (m == 0) break;
  }
  std::sort(t.list.begin(), t.list.end(), MonoLess{});
  for (std::size_t i = 0; i < t.list.size(); ++i) t.index[t.list[i]] = static_cast<int>(i);
  return cache.emplace(key, std::move(t)).first->second;
}

}  // namespace

const std::vector<Mono>& monomials(int m, int d) { return table(m, d).list; }

int monomial_index(int m, int d, const Mono& e) {
  const auto& idx = table(m, d).index;
  auto it = idx.find(e);
  return it == idx.end() ? -1 : it->second;
}

JetPoly JetPoly::constant(int m, int d, const Rational& c) {
  JetPoly f(m, d);
  f.add_term(Mono(m, 0), c);
  return f;
}

JetPoly JetPoly::var(int m, int d, int i) {
  if (i < 0 || i >= m) throw ShapeError("variable index out of range");
  Mono e(m, 0);
  e[i] = 1;
  return monomial(m, d, e);
}

JetPoly JetPoly::monomial(int m, int d, const Mono& e, const Rational& c) {
  if (static_cast<int>(e.size()) != m) throw ShapeError("exponent length");
  JetPoly f(m, d);
  f.add_term(e, c);
  return f;
}

JetPoly JetPoly::with_valid(int v) const {
  JetPoly g = *this;
  g.valid_ = std::min(v, d_);
  return g;
}

Rational JetPoly::coeff(const Mono& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational JetPoly::constant_term() const { return coeff(Mono(m_, 0)); }

int JetPoly::degree() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }

void JetPoly::add_term(const Mono& e, const Rational& c) {
  if (homalg::is_zero(c) || total_degree(e) > d_) return;
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (homalg::is_zero(it->second)) terms_.erase(it);
  }
}

JetPoly JetPoly::truncated(int k) const {
  JetPoly g(m_, d_);
  g.valid_ = valid_;
  for (const auto& [e, c] : terms_)
    if (total_degree(e) <= k) g.terms_.emplace(e, c);
  return g;
}

void JetPoly::check_shape(const JetPoly& g) const {
  if (m_ != g.m_ || d_ != g.d_) throw ShapeError("jet shapes differ");
}

JetPoly JetPoly::operator+(const JetPoly& g) const {
  check_shape(g);
  JetPoly h = *this;
  h.valid_ = std::min(valid_, g.valid_);
  for (const auto& [e, c] : g.terms_) h.add_term(e, c);
  return h;
}

JetPoly JetPoly::operator-(const JetPoly& g) const {
  check_shape(g);
  JetPoly h = *this;
  h.valid_ = std::min(valid_, g.valid_);
  for (const auto& [e, c] : g.terms_) h.add_term(e, -c);
  return h;
}

JetPoly JetPoly::operator-() const {
  JetPoly h = *this;
  for (auto& [e, c] : h.terms_) c = -c;
  return h;
}

JetPoly JetPoly::operator*(const Rational& c) const {
  JetPoly h(m_, d_);
  h.valid_ = valid_;
  if (homalg::is_zero(c)) return h;
  for (const auto& [e, a] : terms_) h.terms_.emplace(e, a * c);
  return h;
}

JetPoly JetPoly::operator*(const JetPoly& g) const { return jet_mul(*this, g); }

QVec JetPoly::coords(int k) const {
  const auto& mons = monomials(m_, std::min(k, d_));
  QVec v(mons.size());
  for (const auto& [e, c] : terms_) {
    if (total_degree(e) > k) continue;
    v[monomial_index(m_, std::min(k, d_), e)] = c;
  }
  return v;
}

JetPoly JetPoly::from_coords(int m, int d, int k, const QVec& v, std::size_t offset) {
  const auto& mons = monomials(m, std::min(k, d));
  JetPoly f(m, d);
  for (std::size_t i = 0; i < mons.size(); ++i) f.add_term(mons[i], v.at(offset + i));
  return f;
}

JetPoly jet_mul(const JetPoly& f, const JetPoly& g) {
  if (f.vars() != g.vars() || f.order() != g.order()) throw ShapeError("jet_mul: shapes differ");
  int m = f.vars(), d = f.order();
  JetPoly h(m, d);
  h = h.with_valid(std::min(f.valid(), g.valid()));
  Mono e(m);
  for (const auto& [a, ca] : f.terms()) {
    int da = total_degree(a);
    for (const auto& [b, cb] : g.terms()) {
      if (da + total_degree(b) > d) break;  // g iterates by ascending degree
      for (int i = 0; i < m; ++i) e[i] = a[i] + b[i];
      h.add_term(e, ca * cb);
    }
  }
  return h;
}

JetPoly jet_partial(int i, const JetPoly& f) {
  if (i < 0 || i >= f.vars()) throw ShapeError("jet_partial: index out of range");
  JetPoly h(f.vars(), f.order());
  h = h.with_valid(std::max(f.valid() - 1, -1));
  for (const auto& [e, c] : f.terms()) {
    if (e[i] == 0) continue;
    Mono e2 = e;
    e2[i] -= 1;
    h.add_term(e2, c * e[i]);
  }
  return h;
}

JetPoly jet_inverse(const JetPoly& f) {
  Rational c0 = f.constant_term();
  if (is_zero(c0)) throw NotInvertible("jet with zero constant term");
  int m = f.vars(), d = f.order();
  // 1/f = (1/c0) * sum_k (-h)^k with h = f/c0 - 1 nilpotent of order d+1.
  JetPoly h = f * (1 / c0) - JetPoly::constant(m, d, 1);
  JetPoly term = JetPoly::constant(m, d, 1).with_valid(f.valid());
  JetPoly acc = term;
  for (int k = 1; k <= d; ++k) {
    term = -(term * h);
    acc += term;
  }
  return acc * (1 / c0);
}

int compare_order(const JetPoly& f, const JetPoly& g, int loss) {
  return std::min({f.valid(), g.valid(), f.order() - loss});
}

JetPoly budget_residual(const JetPoly& f, const JetPoly& g, int loss) {
  return (f - g).truncated(compare_order(f, g, loss));
}

bool budget_eq(const JetPoly& f, const JetPoly& g, int loss) {
  return budget_residual(f, g, loss).is_zero();
}

std::string to_string(const JetPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    bool neg = sgn(c) < 0;
    Rational a = neg ? Rational(-c) : c;
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      out += to_string(a);
    else if (a == 1)
      out += mono;
    else
      out += to_string(a) + "*" + mono;
  }
  return out;
}

namespace {

void parse_term(const std::string& term, bool neg, int m, JetPoly& acc, const std::string& whole) {
  if (term.empty()) throw ParseError("empty term in '" + whole + "'");
  Rational coef = neg ? -1 : 1;
  Mono e(m, 0);
  std::size_t start = 0;
  while (start <= term.size()) {
    std::size_t star = term.find('*', start);
    std::string fac = term.substr(start, star == std::string::npos ? std::string::npos : star - start);
    if (fac.empty()) throw ParseError("empty factor in '" + whole + "'");
    if (fac[0] == 'x') {
      std::size_t caret = fac.find('^');
      std::string idx = fac.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
      if (idx.empty()) {
        if (m != 1) throw UnknownVariable("x");
        idx = "0";  // bare x in one variable
      }
      if (!std::all_of(idx.begin(), idx.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
        throw ParseError("bad variable '" + fac + "' in '" + whole + "'");
      int i = std::stoi(idx);
      if (i >= m) throw UnknownVariable("x" + idx);
      int pw = 1;
      if (caret != std::string::npos) {
        std::string p = fac.substr(caret + 1);
        if (p.empty() || !std::all_of(p.begin(), p.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
          throw ParseError("bad exponent in '" + whole + "'");
        pw = std::stoi(p);
      }
      e[i] += pw;
    } else {
      try {
        coef *= parse_rational(fac);
      } catch (const std::invalid_argument&) {
        throw ParseError("bad factor '" + fac + "' in '" + whole + "'");
      }
    }
    if (star == std::string::npos) break;
    start = star + 1;
  }
  acc.add_term(e, coef);
}

}  // namespace

JetPoly parse_poly(const std::string& text, int m, int d) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ParseError("empty polynomial");
  JetPoly acc(m, d);
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  std::string cur;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if ((ch == '+' || ch == '-') && !cur.empty() && cur.back() != '^') {
      parse_term(cur, neg, m, acc, text);
      neg = ch == '-';
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parse_term(cur, neg, m, acc, text);
  return acc;
}

BaseEndo::BaseEndo(int m, int d, std::vector<JetPoly> components)
    : m_(m), d_(d), comps_(std::move(components)), linear_(m, m) {
  if (static_cast<int>(comps_.size()) != m) throw ShapeError("BaseEndo: need m components");
  for (int i = 0; i < m; ++i) {
    if (comps_[i].vars() != m || comps_[i].order() != d) throw ShapeError("BaseEndo: component shape");
    if (!is_zero(comps_[i].constant_term()))
      throw std::invalid_argument("BaseEndo: component " + std::to_string(i) + " has nonzero constant term");
    for (int j = 0; j < m; ++j) {
      Mono e(m, 0);
      e[j] = 1;
      linear_(i, j) = comps_[i].coeff(e);
    }
  }
}

BaseEndo BaseEndo::identity(int m, int d) {
  std::vector<JetPoly> c;
  for (int i = 0; i < m; ++i) c.push_back(JetPoly::var(m, d, i));
  return BaseEndo(m, d, std::move(c));
}

bool BaseEndo::invertible() const { return m_ == 0 || !is_zero(det(linear_)); }

JetPoly jet_substitute(const BaseEndo& phi, const JetPoly& f) {
  int m = phi.vars(), d = phi.order();
  if (f.vars() != m || f.order() != d) throw ShapeError("jet_substitute: shapes differ");
  int valid = f.valid();
  for (const auto& c : phi.components()) valid = std::min(valid, c.valid());
  JetPoly out(m, d);
  out = out.with_valid(valid);
  if (f.is_zero()) return out;
  // powers[i][k] = phi_i^k
  std::vector<std::vector<JetPoly>> powers(m);
  for (int i = 0; i < m; ++i) {
    powers[i].push_back(JetPoly::constant(m, d, 1));
    for (int k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * phi.components()[i]);
  }
  for (const auto& [e, c] : f.terms()) {
    JetPoly t = JetPoly::constant(m, d, c);
    for (int i = 0; i < m; ++i)
      if (e[i] > 0) t = t * powers[i][e[i]];
    out += t;
  }
  return out.with_valid(valid);
}

BaseEndo endo_compose(const BaseEndo& phi, const BaseEndo& psi) {
  std::vector<JetPoly> c;
  for (const auto& comp : phi.components()) c.push_back(jet_substitute(psi, comp));
  return BaseEndo(phi.vars(), phi.order(), std::move(c));
}

BaseEndo endo_invert(const BaseEndo& phi) {
  int m = phi.vars(), d = phi.order();
  if (!phi.invertible()) throw NotInvertible("endomorphism has singular linear part");
  if (m == 0) return phi;
  QMatrix linv = inverse(phi.linear_part());
  auto apply_linv = [&](const std::vector<JetPoly>& v) {
    std::vector<JetPoly> out(m, JetPoly(m, d));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out[i] += v[j] * linv(i, j);
    return out;
  };
  std::vector<JetPoly> x;
  for (int i = 0; i < m; ++i) x.push_back(JetPoly::var(m, d, i));
  // Each pass fixes one more degree of phi(psi(x)) = x.
  std::vector<JetPoly> psi = apply_linv(x);
  for (int pass = 1; pass < d; ++pass) {
    BaseEndo cur(m, d, psi);
    BaseEndo comp = endo_compose(phi, cur);
    std::vector<JetPoly> err(m, JetPoly(m, d));
    for (int i = 0; i < m; ++i) err[i] = comp.components()[i] - x[i];
    auto corr = apply_linv(err);
    for (int i = 0; i < m; ++i) psi[i] -= corr[i];
  }
  return BaseEndo(m, d, psi);
}

Base::Base(BaseEndo phi) : phi_(std::move(phi)), phi_inv_(endo_invert(phi_)) {}

JetPoly Base::pull(const JetPoly& f, int k) const {
  JetPoly g = f;
  const BaseEndo& step = k >= 0 ? phi_ : phi_inv_;
  for (int i = 0; i < std::abs(k); ++i) g = jet_substitute(step, g);
  return g;
}

}  // namespace homalg
