#pragma once

#include <memory>

#include "homalg/connection.hpp"

namespace fx {

using namespace homalg;

inline JetPoly P(const std::shared_ptr<const Base>& b, const std::string& s) {
  return parse_poly(s, b->vars(), b->order());
}

struct World {
  std::shared_ptr<const Base> base;
  std::shared_ptr<const HomAlgebroid> L;
  std::shared_ptr<const HomBundle> E;
  Connection trivial() const { return trivial_connection(E, L); }
};

inline std::shared_ptr<const Base> s1_base(int d = 3) {
  return std::make_shared<const Base>(BaseEndo(1, d, {parse_poly("2*x0", 1, d)}));
}

inline std::shared_ptr<const HomAlgebroid> s1_algebroid(const std::shared_ptr<const Base>& b, const std::string& anchor = "x0") {
  PolyMatrix phiL = PolyMatrix::identity(1, 1, b->order());
  PolyMatrix rho(1, 1, 1, b->order());
  rho(0, 0) = P(b, anchor);
  Structure c(1, std::vector<std::vector<JetPoly>>(1, std::vector<JetPoly>(1, b->zero())));
  return std::make_shared<const HomAlgebroid>(b, phiL, rho, c);
}

inline World s1(int r = 1, int d = 3) {
  World w;
  w.base = s1_base(d);
  w.L = s1_algebroid(w.base);
  w.E = std::make_shared<const HomBundle>(w.base, PolyMatrix::identity(r, 1, d));
  return w;
}

inline Structure so3(const std::shared_ptr<const Base>& b) {
  Structure c(3, std::vector<std::vector<JetPoly>>(3, std::vector<JetPoly>(3, b->zero())));
  auto eps = [](int i, int j, int k) { return (i - j) * (j - k) * (k - i) / 2; };
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c[k][i][j] = b->constant(eps(i, j, k));
  return c;
}

inline World s2(int r = 1, int d = 2) {
  World w;
  w.base = std::make_shared<const Base>(BaseEndo::identity(0, d));
  w.L = std::make_shared<const HomAlgebroid>(w.base, PolyMatrix::identity(3, 0, d), PolyMatrix(0, 3, 0, d), so3(w.base));
  w.E = std::make_shared<const HomBundle>(w.base, PolyMatrix::identity(r, 0, d));
  return w;
}

inline PolyMatrix qmat(const std::shared_ptr<const Base>& b, std::vector<std::vector<std::string>> rows) {
  PolyMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), b->vars(), b->order());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = P(b, rows[i][j]);
  return m;
}

}  // namespace fx

namespace fx {

/// so(3) acting on a rank-r trivial bundle over a point.
inline World s4(int r = 2, int d = 2) { return s2(r, d); }

inline Connection with_A(const World& w, std::vector<PolyMatrix> A, int twist = 1) {
  Connection c = w.trivial();
  c.A = std::move(A);
  c.twist = twist;
  return c;
}

/// Deterministic small-integer stream for randomized checks.
struct Rng {
  unsigned long long s;
  explicit Rng(unsigned long long seed) : s(seed * 6364136223846793005ULL + 1442695040888963407ULL) {}
  int next(int lo, int hi) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return lo + static_cast<int>((s >> 33) % static_cast<unsigned long long>(hi - lo + 1));
  }
};

}  // namespace fx
