#include "dwqa/mps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dwqa {

namespace {

using Matrix = MpsState::Matrix;

// Relative eigenvalue floor below which Gram eigenvalues are numerical noise.
constexpr double kGramFloor = 1e-14;

// Number of leading eigenvalues (sorted descending) to keep.
int keep_count(const Eigen::VectorXd& lam, int chi_max, double cutoff, double& discarded) {
  const int n = static_cast<int>(lam.size());
  const double total = std::max(lam.sum(), 0.0);
  int k = n;
  double tail = 0.0;
  while (k > 1) {
    const double v = std::max(lam(k - 1), 0.0);
    if (k > chi_max || tail + v <= cutoff * total || v <= kGramFloor * lam(0)) {
      tail += v;
      --k;
    } else {
      break;
    }
  }
  discarded = total > 0.0 ? tail / total : 0.0;
  return k;
}

// Eigenvectors of a Hermitian Gram matrix ordered by descending eigenvalue.
void sorted_eigen(const Matrix& gram, Eigen::VectorXd& lam, Matrix& vec) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  lam = es.eigenvalues().reverse();
  vec = es.eigenvectors().rowwise().reverse();
}

}  // namespace

MpsState MpsState::product(const std::vector<std::array<std::complex<double>, 2>>& local) {
  if (local.size() < 2) throw std::invalid_argument("MPS needs at least two sites");
  MpsState out;
  out.sites_.resize(local.size());
  for (std::size_t i = 0; i < local.size(); ++i)
    for (int s = 0; s < 2; ++s) out.sites_[i][s] = Matrix::Constant(1, 1, local[i][s]);
  out.center_ = 0;
  return out;
}

MpsState MpsState::from_config(const SpinConfig& config) {
  std::vector<std::array<std::complex<double>, 2>> local(config.size());
  for (std::size_t i = 0; i < config.size(); ++i)
    local[i] = config[i] > 0 ? std::array<std::complex<double>, 2>{0.0, 1.0}
                             : std::array<std::complex<double>, 2>{1.0, 0.0};
  return product(local);
}

int MpsState::bond_dimension(int bond) const {
  return static_cast<int>(sites_[static_cast<std::size_t>(bond)][0].cols());
}

int MpsState::max_bond_dimension() const {
  int d = 1;
  for (int b = 0; b + 1 < n_sites(); ++b) d = std::max(d, bond_dimension(b));
  return d;
}

void MpsState::shift_right() {
  auto& a = sites_[static_cast<std::size_t>(center_)];
  auto& b = sites_[static_cast<std::size_t>(center_ + 1)];
  const Eigen::Index dl = a[0].rows(), dr = a[0].cols();
  Matrix m(2 * dl, dr);
  m << a[0], a[1];
  Eigen::HouseholderQR<Matrix> qr(m);
  const Eigen::Index k = std::min(2 * dl, dr);
  Matrix q = qr.householderQ() * Matrix::Identity(2 * dl, k);
  Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  a[0] = q.topRows(dl);
  a[1] = q.bottomRows(dl);
  b[0] = r * b[0];
  b[1] = r * b[1];
  ++center_;
}

void MpsState::shift_left() {
  auto& a = sites_[static_cast<std::size_t>(center_ - 1)];
  auto& b = sites_[static_cast<std::size_t>(center_)];
  const Eigen::Index dl = b[0].rows(), dr = b[0].cols();
  Matrix m(dl, 2 * dr);
  m << b[0], b[1];
  Matrix mt = m.adjoint();
  Eigen::HouseholderQR<Matrix> qr(mt);
  const Eigen::Index k = std::min(2 * dr, dl);
  Matrix q = qr.householderQ() * Matrix::Identity(2 * dr, k);
  Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  Matrix qa = q.adjoint();
  b[0] = qa.leftCols(dr);
  b[1] = qa.rightCols(dr);
  Matrix ra = r.adjoint();
  a[0] = a[0] * ra;
  a[1] = a[1] * ra;
  --center_;
}

void MpsState::move_center(int site) {
  if (site < 0 || site >= n_sites()) throw std::out_of_range("center site out of range");
  while (center_ < site) shift_right();
  while (center_ > site) shift_left();
}

double MpsState::norm() const {
  const auto& c = sites_[static_cast<std::size_t>(center_)];
  return std::sqrt(c[0].squaredNorm() + c[1].squaredNorm());
}

void MpsState::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0)) throw std::runtime_error("cannot normalize a zero MPS");
  auto& c = sites_[static_cast<std::size_t>(center_)];
  c[0] /= nrm;
  c[1] /= nrm;
}

void MpsState::apply_two_site(int i, const Gate& gate, int chi_max, double cutoff,
                              bool move_right) {
  if (i < 0 || i + 1 >= n_sites()) throw std::out_of_range("bond out of range");
  if (center_ < i) move_center(i);
  if (center_ > i + 1) move_center(i + 1);
  auto& a = sites_[static_cast<std::size_t>(i)];
  auto& b = sites_[static_cast<std::size_t>(i + 1)];
  const Eigen::Index dl = a[0].rows(), dr = b[0].cols();

  std::array<Matrix, 4> blocks;
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) blocks[2 * s1 + s2] = a[s1] * b[s2];
  Matrix theta(2 * dl, 2 * dr);
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      auto blk = theta.block(s1 * dl, s2 * dr, dl, dr);
      blk.setZero();
      for (int t = 0; t < 4; ++t) {
        const auto g = gate(2 * s1 + s2, t);
        if (g != 0.0) blk += g * blocks[t];
      }
    }

  Eigen::VectorXd lam;
  Matrix vec;
  double discarded = 0.0;
  if (move_right) {
    sorted_eigen(theta * theta.adjoint(), lam, vec);
    const int k = keep_count(lam, chi_max, cutoff, discarded);
    Matrix u = vec.leftCols(k);
    Matrix rest = u.adjoint() * theta;
    a[0] = u.topRows(dl);
    a[1] = u.bottomRows(dl);
    b[0] = rest.leftCols(dr);
    b[1] = rest.rightCols(dr);
    center_ = i + 1;
  } else {
    sorted_eigen(theta.adjoint() * theta, lam, vec);
    const int k = keep_count(lam, chi_max, cutoff, discarded);
    Matrix v = vec.leftCols(k);
    Matrix rest = theta * v;
    Matrix vh = v.adjoint();
    a[0] = rest.topRows(dl);
    a[1] = rest.bottomRows(dl);
    b[0] = vh.leftCols(dr);
    b[1] = vh.rightCols(dr);
    center_ = i;
  }
  truncation_error_ += discarded;
  normalize();
}

std::complex<double> MpsState::amplitude(const SpinConfig& config) const {
  if (static_cast<int>(config.size()) != n_sites())
    throw std::invalid_argument("configuration length does not match the MPS");
  Eigen::RowVectorXcd v = sites_[0][config[0] > 0 ? 1 : 0].row(0);
  for (int i = 1; i < n_sites(); ++i)
    v = v * sites_[static_cast<std::size_t>(i)][config[static_cast<std::size_t>(i)] > 0 ? 1 : 0];
  return v(0);
}

std::vector<double> MpsState::site_z() const {
  MpsState w = *this;
  w.move_center(0);
  std::vector<double> out(static_cast<std::size_t>(n_sites()));
  for (int i = 0; i < n_sites(); ++i) {
    w.move_center(i);
    const auto& c = w.sites_[static_cast<std::size_t>(i)];
    const double up = c[1].squaredNorm(), dn = c[0].squaredNorm();
    out[static_cast<std::size_t>(i)] = (up - dn) / (up + dn);
  }
  return out;
}

std::vector<double> MpsState::bond_zz() const {
  MpsState w = *this;
  w.move_center(0);
  std::vector<double> out(static_cast<std::size_t>(n_sites() - 1));
  for (int i = 0; i + 1 < n_sites(); ++i) {
    w.move_center(i);
    const auto& a = w.sites_[static_cast<std::size_t>(i)];
    const auto& b = w.sites_[static_cast<std::size_t>(i + 1)];
    double same = 0.0, diff = 0.0;
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2) {
        const double p = (a[s1] * b[s2]).squaredNorm();
        (s1 == s2 ? same : diff) += p;
      }
    out[static_cast<std::size_t>(i)] = (same - diff) / (same + diff);
  }
  return out;
}

double MpsState::single_kink_weight() const {
  const int n = n_sites();
  // prefix[j] = A_0[down] ... A_{j-1}[down]; suffix[j] = A_j[up] ... A_{n-1}[up].
  std::vector<Eigen::RowVectorXcd> prefix(static_cast<std::size_t>(n + 1));
  std::vector<Eigen::VectorXcd> suffix(static_cast<std::size_t>(n + 1));
  prefix[0] = Eigen::RowVectorXcd::Ones(1);
  for (int j = 0; j < n; ++j)
    prefix[static_cast<std::size_t>(j + 1)] = prefix[static_cast<std::size_t>(j)] * sites_[static_cast<std::size_t>(j)][0];
  suffix[static_cast<std::size_t>(n)] = Eigen::VectorXcd::Ones(1);
  for (int j = n - 1; j >= 0; --j)
    suffix[static_cast<std::size_t>(j)] = sites_[static_cast<std::size_t>(j)][1] * suffix[static_cast<std::size_t>(j + 1)];
  double total = 0.0;
  for (int j = 1; j < n; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    total += std::norm((prefix[jj] * suffix[jj])(0));
  }
  const double nrm = norm();
  return total / (nrm * nrm);
}

Eigen::VectorXcd MpsState::to_dense() const {
  const int n = n_sites();
  if (n > 24) throw std::invalid_argument("dense conversion limited to 24 sites");
  // rows: basis index of sites 0..i, columns: right bond.
  Matrix acc(2, sites_[0][0].cols());
  acc.row(0) = sites_[0][0].row(0);
  acc.row(1) = sites_[0][1].row(0);
  for (int i = 1; i < n; ++i) {
    const auto& t = sites_[static_cast<std::size_t>(i)];
    Matrix next(acc.rows() * 2, t[0].cols());
    for (Eigen::Index r = 0; r < acc.rows(); ++r) {
      next.row(2 * r) = acc.row(r) * t[0];
      next.row(2 * r + 1) = acc.row(r) * t[1];
    }
    acc = std::move(next);
  }
  return acc.col(0);
}

std::complex<double> overlap(const MpsState& bra, const MpsState& ket) {
  if (bra.n_sites() != ket.n_sites()) throw std::invalid_argument("MPS lengths differ");
  Matrix env = Matrix::Ones(1, 1);
  for (int i = 0; i < bra.n_sites(); ++i) {
    const auto& a = bra.site(i);
    const auto& b = ket.site(i);
    env = a[0].adjoint() * env * b[0] + a[1].adjoint() * env * b[1];
  }
  return env(0, 0);
}

}  // namespace dwqa
