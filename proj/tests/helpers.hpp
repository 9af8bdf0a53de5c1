#pragma once

#include <gtest/gtest.h>

#include "annulus/annulus.hpp"

namespace annulus::test {

inline double dist(const ComplexMatrix& A, const ComplexMatrix& B) { return operator_norm(A - B); }

inline ComplexMatrix diag2(cplx a, cplx b) { return gen::diag({a, b}); }

inline AnnulusRational rat(double r, std::vector<cplx> p, std::vector<cplx> q1 = {}, std::vector<cplx> q2 = {},
                           cplx scale = 1.0) {
  AnnulusRational f;
  f.r = r;
  f.p = std::move(p);
  f.q1_roots = std::move(q1);
  f.q2_roots = std::move(q2);
  f.scale = scale;
  return f;
}

inline Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return Errc::Parse;
}

}  // namespace annulus::test
