#include "chordsim/phase_vector.hpp"

#include "chordsim/errors.hpp"

namespace chordsim {

PhaseVector::PhaseVector(int dof) : coords_(Eigen::VectorXd::Zero(2 * dof)) {
  if (dof < 1) throw DimensionError("PhaseVector: dof must be >= 1");
}

PhaseVector::PhaseVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2 || coords_.size() % 2 != 0)
    throw DimensionError("PhaseVector: coordinate count must be even and >= 2");
}

PhaseVector PhaseVector::from_pq(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("PhaseVector::from_pq: p and q lengths differ");
  PhaseVector v(static_cast<int>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    v.p(static_cast<int>(i)) = p[i];
    v.q(static_cast<int>(i)) = q[i];
  }
  return v;
}

PhaseVector PhaseVector::pq(double p, double q) {
  PhaseVector v(1);
  v.p(0) = p;
  v.q(0) = q;
  return v;
}

PhaseVector& PhaseVector::operator+=(const PhaseVector& o) {
  if (o.size() != size()) throw DimensionError("PhaseVector: dimension mismatch in +");
  coords_ += o.coords_;
  return *this;
}

PhaseVector& PhaseVector::operator-=(const PhaseVector& o) {
  if (o.size() != size()) throw DimensionError("PhaseVector: dimension mismatch in -");
  coords_ -= o.coords_;
  return *this;
}

PhaseVector& PhaseVector::operator*=(double s) {
  coords_ *= s;
  return *this;
}

double skew_product(const Eigen::VectorXd& x, const Eigen::VectorXd& x2) {
  if (x.size() != x2.size() || x.size() % 2 != 0)
    throw DimensionError("skew_product: dimension mismatch");
  const Eigen::Index n = x.size() / 2;
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += x[i] * x2[n + i] - x[n + i] * x2[i];
  return s;
}

double skew_product(const PhaseVector& x, const PhaseVector& x2) {
  return skew_product(x.vec(), x2.vec());
}

PhaseVector j_apply(const PhaseVector& x) {
  const int n = x.dof();
  PhaseVector out(n);
  for (int i = 0; i < n; ++i) {
    out.p(i) = -x.q(i);
    out.q(i) = x.p(i);
  }
  return out;
}

Eigen::MatrixXd symplectic_j(int dof) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * dof, 2 * dof);
  for (int i = 0; i < dof; ++i) {
    j(i, dof + i) = -1.0;
    j(dof + i, i) = 1.0;
  }
  return j;
}

}  // namespace chordsim
