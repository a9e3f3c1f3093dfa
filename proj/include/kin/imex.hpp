#pragma once

#include <string>
#include <vector>

#include "kin/geometry.hpp"

namespace kin {

// Paired explicit/diagonally-implicit Butcher tableaus.
struct ImexTableau {
  std::string name;
  int stages = 0;
  int order = 1;
  std::vector<double> a_ex;  // stages x stages, strictly lower triangular
  std::vector<double> a_im;  // stages x stages, lower triangular
  std::vector<double> c_ex, c_im;
  std::vector<double> w_ex, w_im;

  double ex(int l, int m) const { return a_ex[static_cast<std::size_t>(l) * stages + m]; }
  double im(int l, int m) const { return a_im[static_cast<std::size_t>(l) * stages + m]; }
};

ImexTableau imex_euler();
ImexTableau ars222();
ImexTableau bpr343();
ImexTableau tableau_by_name(const std::string& name);

struct TableauReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks triangularity, row sums against the abscissae, weight sums, and the
// classical order conditions (including the coupling products) up to the
// declared order.
TableauReport validate_tableau(const ImexTableau& t);

}  // namespace kin
