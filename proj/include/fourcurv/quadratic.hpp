#pragma once

// Hamilton's quadratic curvature term.
//   B(Rm)_ijkl = sum_mp R_imjp R_kmlp
//   Q(Rm)_ijkl = B_ijkl - B_ijlk + B_ikjl - B_iljk

#include "fourcurv/berger.hpp"

namespace fourcurv {

Tensor4 b_tensor(const Tensor4& t);
Tensor4 q_tensor(const Tensor4& t);
inline Tensor4 b_tensor(const CurvatureTensor& t) { return b_tensor(t.tensor()); }
inline Tensor4 q_tensor(const CurvatureTensor& t) { return q_tensor(t.tensor()); }

/// Q(Rm) components predicted from Berger data (a, b), indexed as in the
/// table: 1212, 1313, 1414, 1234, 1342, 1423. Dual planes share the value.
struct QTableRow {
  std::array<int, 4> index;  // 1-based
  double predicted;
  double actual;
};
std::vector<QTableRow> q_table(const CurvatureTensor& t, const BergerForm& bf);

/// Max |Q_actual - Q_predicted| over the table, the dual-plane repeats, and
/// the vanishing pattern Q_ijik = 0 for distinct i, j, k.
double q_table_check(const CurvatureTensor& t, const BergerForm& bf);

struct QPairing {
  double direct_plus = 0.0;   // <Q(Rm)+, W+> by contraction
  double direct_minus = 0.0;
  double det_plus = 0.0;      // 9 det W+
  double det_minus = 0.0;
  double rel_disagreement = 0.0;
};

/// Throws NotEinstein for non-Einstein input.
QPairing q_weyl_pairing(const CurvatureTensor& t);

/// Right-hand side of the expansion of 2Q(Rm) through the Weyl tensor and
/// the Ricci tensor, specialized to dimension four.
Tensor4 cm_expansion_rhs(const CurvatureTensor& t);
/// max |2Q(Rm) - rhs| componentwise.
double cm_expansion_check(const CurvatureTensor& t);

}  // namespace fourcurv
