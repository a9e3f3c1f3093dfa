#include "kin/imex.hpp"

#include <cmath>
#include <stdexcept>

namespace kin {

ImexTableau imex_euler() {
  ImexTableau t;
  t.name = "EULER";
  t.stages = 2;
  t.order = 1;
  t.a_ex = {0, 0, 1, 0};
  t.a_im = {0, 0, 0, 1};
  t.c_ex = {0, 1};
  t.c_im = {0, 1};
  t.w_ex = {1, 0};
  t.w_im = {0, 1};
  return t;
}

ImexTableau ars222() {
  const double g = 1.0 - 1.0 / std::sqrt(2.0);
  const double d = 1.0 - 1.0 / (2.0 * g);
  ImexTableau t;
  t.name = "ARS222";
  t.stages = 3;
  t.order = 2;
  t.a_ex = {0, 0, 0, g, 0, 0, d, 1 - d, 0};
  t.a_im = {0, 0, 0, 0, g, 0, 0, 1 - g, g};
  t.c_ex = {0, g, 1};
  t.c_im = {0, g, 1};
  t.w_ex = {d, 1 - d, 0};
  t.w_im = {0, 1 - g, g};
  return t;
}

ImexTableau bpr343() {
  ImexTableau t;
  t.name = "BPR343";
  t.stages = 5;
  t.order = 3;
  t.a_ex = {0,         0,        0,        0,    0,  //
            1,         0,        0,        0,    0,  //
            4.0 / 9,   2.0 / 9,  0,        0,    0,  //
            1.0 / 4,   0,        3.0 / 4,  0,    0,  //
            1.0 / 4,   0,        3.0 / 4,  0,    0};
  t.a_im = {0,         0,        0,        0,    0,    //
            1.0 / 2,   1.0 / 2,  0,        0,    0,    //
            5.0 / 18,  -1.0 / 9, 1.0 / 2,  0,    0,    //
            1.0 / 2,   0,        0,        1.0 / 2, 0,  //
            1.0 / 4,   0,        3.0 / 4,  -1.0 / 2, 1.0 / 2};
  t.c_ex = {0, 1, 2.0 / 3, 1, 1};
  t.c_im = {0, 1, 2.0 / 3, 1, 1};
  t.w_ex = {1.0 / 4, 0, 3.0 / 4, 0, 0};
  t.w_im = {1.0 / 4, 0, 3.0 / 4, -1.0 / 2, 1.0 / 2};
  return t;
}

ImexTableau tableau_by_name(const std::string& name) {
  if (name == "EULER") return imex_euler();
  if (name == "ARS222") return ars222();
  if (name == "BPR343") return bpr343();
  throw std::invalid_argument("unknown tableau: " + name);
}

namespace {

void check(TableauReport& rep, bool cond, const std::string& what) {
  if (!cond) {
    rep.ok = false;
    rep.violations.push_back(what);
  }
}

double dot3(const std::vector<double>& w, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * v[i];
  return s;
}

std::vector<double> matvec(const std::vector<double>& a, const std::vector<double>& v, int n) {
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += a[static_cast<std::size_t>(i) * n + j] * v[j];
  return out;
}

}  // namespace

TableauReport validate_tableau(const ImexTableau& t) {
  TableauReport rep;
  const int s = t.stages;
  const double tol = 1e-13;

  for (int l = 0; l < s; ++l)
    for (int m = 0; m < s; ++m) {
      if (m >= l) check(rep, t.ex(l, m) == 0.0, "explicit part not strictly lower triangular");
      if (m > l) check(rep, t.im(l, m) == 0.0, "implicit part not lower triangular");
    }

  for (int l = 0; l < s; ++l) {
    double rex = 0.0, rim = 0.0;
    for (int m = 0; m < s; ++m) {
      rex += t.ex(l, m);
      rim += t.im(l, m);
    }
    check(rep, std::abs(rex - t.c_ex[l]) < 1e-14, "explicit row sum != abscissa");
    check(rep, std::abs(rim - t.c_im[l]) < 1e-14, "implicit row sum != abscissa");
  }

  double swx = 0.0, swi = 0.0;
  for (int m = 0; m < s; ++m) {
    swx += t.w_ex[m];
    swi += t.w_im[m];
  }
  check(rep, std::abs(swx - 1.0) < 1e-14, "explicit weights do not sum to 1");
  check(rep, std::abs(swi - 1.0) < 1e-14, "implicit weights do not sum to 1");

  if (t.order >= 2) {
    std::vector<double> cx = t.c_ex, ci = t.c_im;
    check(rep, std::abs(dot3(t.w_ex, cx) - 0.5) < tol, "order 2: w_ex.c != 1/2");
    check(rep, std::abs(dot3(t.w_im, ci) - 0.5) < tol, "order 2: w_im.c != 1/2");
    check(rep, std::abs(dot3(t.w_ex, ci) - 0.5) < tol, "order 2 coupling: w_ex.c_im != 1/2");
    check(rep, std::abs(dot3(t.w_im, cx) - 0.5) < tol, "order 2 coupling: w_im.c_ex != 1/2");
  }
  if (t.order >= 3) {
    std::vector<double> c2(s);
    for (int i = 0; i < s; ++i) c2[i] = t.c_ex[i] * t.c_im[i];  // c_ex == c_im here
    check(rep, std::abs(dot3(t.w_ex, c2) - 1.0 / 3) < tol, "order 3: w_ex.c^2 != 1/3");
    check(rep, std::abs(dot3(t.w_im, c2) - 1.0 / 3) < tol, "order 3: w_im.c^2 != 1/3");
    const auto axc = matvec(t.a_ex, t.c_ex, s);
    const auto aic = matvec(t.a_im, t.c_im, s);
    check(rep, std::abs(dot3(t.w_ex, axc) - 1.0 / 6) < tol, "order 3: w_ex.Aex.c != 1/6");
    check(rep, std::abs(dot3(t.w_ex, aic) - 1.0 / 6) < tol, "order 3: w_ex.Aim.c != 1/6");
    check(rep, std::abs(dot3(t.w_im, axc) - 1.0 / 6) < tol, "order 3: w_im.Aex.c != 1/6");
    check(rep, std::abs(dot3(t.w_im, aic) - 1.0 / 6) < tol, "order 3: w_im.Aim.c != 1/6");
  }
  return rep;
}

}  // namespace kin
