#include "mcnv/norms.hpp"

#include <cmath>
#include <vector>

#include "mcnv/check.hpp"
#include "mcnv/ops.hpp"

namespace mcnv {

NormKind norm_kind_from_string(const std::string& s) {
  if (s == "L2") return NormKind::L2;
  if (s == "H1") return NormKind::H1;
  if (s == "H2") return NormKind::H2;
  if (s == "L4") return NormKind::L4;
  if (s == "Linf") return NormKind::Linf;
  require_arg(false, "unknown norm kind: " + s);
  return NormKind::L2;
}

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::L2: return "L2";
    case NormKind::H1: return "H1";
    case NormKind::H2: return "H2";
    case NormKind::L4: return "L4";
    case NormKind::Linf: return "Linf";
  }
  return "?";
}

namespace {

// hx * trapezoid-in-y integral of |f|^p over the grid, fixed order.
double integral_pow(const std::vector<const ScalarField*>& comps, int p) {
  const Grid& g = comps.front()->grid;
  const double hx = g.hx();
  const double hy = g.hy();
  double total = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    double col = 0.0;
    for (int j = 0; j < g.ny; ++j) {
      double mag2 = 0.0;
      for (const ScalarField* f : comps) {
        double x = f->at(i, j);
        mag2 += x * x;
      }
      double w = (j == 0 || j == g.ny - 1) ? 0.5 * hy : hy;
      col += w * ((p == 2) ? mag2 : mag2 * mag2);
    }
    total += hx * col;
  }
  return total;
}

double max_abs(const std::vector<const ScalarField*>& comps) {
  double m = 0.0;
  for (const ScalarField* f : comps)
    for (double x : f->v) m = std::max(m, std::fabs(x));
  return m;
}

struct Derivs {
  ScalarField fx, fy, fxx, fxy, fyx, fyy;
};

Derivs derivs(const ScalarField& f) {
  Derivs d;
  d.fx = dx(f);
  d.fy = dy(f);
  d.fxx = dx(d.fx);
  d.fxy = dx(d.fy);
  d.fyx = dy(d.fx);
  d.fyy = d2y(f);
  return d;
}

double norm_sq_l2(const ScalarField& f) { return integral_pow({&f}, 2); }

double h1_sq(const ScalarField& f, const Derivs& d) {
  return norm_sq_l2(f) + norm_sq_l2(d.fx) + norm_sq_l2(d.fy);
}

double second_sq(const Derivs& d) {
  return norm_sq_l2(d.fxx) + norm_sq_l2(d.fxy) + norm_sq_l2(d.fyx) + norm_sq_l2(d.fyy);
}

}  // namespace

double norm(const ScalarField& f, NormKind kind) {
  switch (kind) {
    case NormKind::L2:
      return std::sqrt(norm_sq_l2(f));
    case NormKind::H1: {
      Derivs d = derivs(f);
      return std::sqrt(h1_sq(f, d));
    }
    case NormKind::H2: {
      Derivs d = derivs(f);
      return std::sqrt(h1_sq(f, d) + second_sq(d));
    }
    case NormKind::L4:
      return std::pow(integral_pow({&f}, 4), 0.25);
    case NormKind::Linf:
      return max_abs({&f});
  }
  return 0.0;
}

double norm(const VectorField& f, NormKind kind) {
  switch (kind) {
    case NormKind::L2:
      return std::sqrt(integral_pow({&f.x, &f.y}, 2));
    case NormKind::H1: {
      Derivs a = derivs(f.x);
      Derivs b = derivs(f.y);
      return std::sqrt(h1_sq(f.x, a) + h1_sq(f.y, b));
    }
    case NormKind::H2: {
      Derivs a = derivs(f.x);
      Derivs b = derivs(f.y);
      return std::sqrt(h1_sq(f.x, a) + second_sq(a) + h1_sq(f.y, b) + second_sq(b));
    }
    case NormKind::L4:
      return std::pow(integral_pow({&f.x, &f.y}, 4), 0.25);
    case NormKind::Linf:
      return max_abs({&f.x, &f.y});
  }
  return 0.0;
}

double grad_h1_norm(const ScalarField& f) {
  Derivs d = derivs(f);
  return std::sqrt(norm_sq_l2(d.fx) + norm_sq_l2(d.fy) + second_sq(d));
}

double grad_h1_norm(const VectorField& f) {
  Derivs a = derivs(f.x);
  Derivs b = derivs(f.y);
  double s = norm_sq_l2(a.fx) + norm_sq_l2(a.fy) + second_sq(a) + norm_sq_l2(b.fx) +
             norm_sq_l2(b.fy) + second_sq(b);
  return std::sqrt(s);
}

double grad_l4_norm(const ScalarField& f) {
  ScalarField fx = dx(f);
  ScalarField fy = dy(f);
  return std::pow(integral_pow({&fx, &fy}, 4), 0.25);
}

double grad_l4_norm(const VectorField& f) {
  ScalarField ax = dx(f.x);
  ScalarField ay = dy(f.x);
  ScalarField bx = dx(f.y);
  ScalarField by = dy(f.y);
  return std::pow(integral_pow({&ax, &ay, &bx, &by}, 4), 0.25);
}

}  // namespace mcnv
