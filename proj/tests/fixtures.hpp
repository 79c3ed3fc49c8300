#pragma once

#include "spectra/system.hpp"

namespace spectra::fixtures {

// Six equations in S^4; infeasible with k = 2 and r = (1, 1).
inline SdpSystem six_by_four() {
  SdpSystem s;
  s.n = 4;
  s.A = {
      SymMatrix{{2, 0, 0, 1}, {0, 3, 0, -1}, {0, 0, 4, 2}, {1, -1, 2, 0}},
      SymMatrix{{-1, 2, 1, -2}, {2, 3, 3, 1}, {1, 3, 4, -3}, {-2, 1, -3, 3}},
      SymMatrix{{-1, 1, -2, 0}, {1, -2, 0, 2}, {-2, 0, -3, -2}, {0, 2, -2, -1}},
      SymMatrix{{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, -1, 0}, {0, 0, 0, 1}},
      SymMatrix{{0, -1, 0, 0}, {-1, 0, 0, -1}, {0, 0, 1, 1}, {0, -1, 1, 0}},
      SymMatrix{{-1, 0, 0, -1}, {0, 0, 1, 0}, {0, 1, 0, -1}, {-1, 0, -1, 1}},
  };
  s.b = {0, 6, -3, 2, 1, 3};
  return s;
}

inline std::vector<RatVector> six_by_four_rays() {
  return {{1, -1, -1, -1, -4, 3}, {0, 1, 1, 0, 3, -2}, {0, 0, 1, 2, 1, -1}};
}

// Final reformulated data of six_by_four.
inline SdpSystem six_by_four_reformulated() {
  SdpSystem s;
  s.n = 4;
  s.A = {
      SymMatrix::diagonal({1, 0, 0, 0}),
      SymMatrix{{0, 0, -1, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 0}},
      SymMatrix{{0, 0, 0, 1}, {0, 0, -1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}},
      SymMatrix{{0, 0, 1, 0}, {0, 1, -3, 0}, {1, -3, 7, 0}, {0, 0, 0, 1}},
      SymMatrix{{0, -1, 2, 0}, {-1, 2, -4, -1}, {2, -4, 9, 3}, {0, -1, 3, 0}},
      SymMatrix{{-1, 1, -2, -1}, {1, -1, 3, 1}, {-2, 3, -8, -3}, {-1, 1, -3, 1}},
  };
  s.b = {0, 0, -1, 2, 1, 3};
  return s;
}

// Four equations in S^4; feasible, maximum rank 2.
inline SdpSystem four_by_four() {
  SdpSystem s;
  s.n = 4;
  s.A = {
      SymMatrix{{-2, 2, 7, -3}, {2, -2, -4, -6}, {7, -4, -15, -7}, {-3, -6, -7, 0}},
      SymMatrix{{2, 0, -3, 2}, {0, 4, 6, 4}, {-3, 6, 14, 5}, {2, 4, 5, 0}},
      SymMatrix{{2, 0, -3, -1}, {0, -1, -3, 0}, {-3, -3, -3, 2}, {-1, 0, 2, 0}},
      SymMatrix{{-1, 1, 4, 2}, {1, 6, 11, 2}, {4, 11, 16, 1}, {2, 2, 1, 0}},
  };
  s.b = {-3, 2, 1, 0};
  return s;
}

inline std::vector<RatVector> four_by_four_rays() {
  return {{1, 2, -1, -1}, {0, 1, -2, -1}};
}

inline SdpSystem four_by_four_reformulated() {
  SdpSystem s;
  s.n = 4;
  s.A = {
      SymMatrix::diagonal({1, 0, 0, 0}),
      SymMatrix{{-1, 0, -1, 2}, {0, 1, 0, 0}, {-1, 0, 0, 0}, {2, 0, 0, 0}},
      SymMatrix{{2, -2, 1, -1}, {-2, 1, -2, 1}, {1, -2, 1, 0}, {-1, 1, 0, 0}},
      SymMatrix{{-1, 2, 0, 2}, {2, 3, 1, 0}, {0, 1, 0, 1}, {2, 0, 1, 0}},
  };
  s.b = {0, 0, 1, 0};
  return s;
}

// Weakly infeasible in S^3: x11 = 0, x22 + 2 x13 = -1.
inline SdpSystem motivating() {
  SdpSystem s;
  s.n = 3;
  s.A = {SymMatrix::diagonal({1, 0, 0}),
         SymMatrix{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}};
  s.b = {0, -1};
  return s;
}

// Strongly infeasible in S^3 with ray (4, 2, 1).
inline SdpSystem strong3() {
  SdpSystem s;
  s.n = 3;
  s.A = {SymMatrix::diagonal({1, 0, 0}),
         SymMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}},
         SymMatrix::diagonal({0, 1, 1})};
  s.b = {0, -1, 1};
  return s;
}

}  // namespace spectra::fixtures
