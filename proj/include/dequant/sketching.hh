#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "dequant/core_access.hh"

namespace dequant {

/// Row-selection sketch: row k of S is scales[k] * e_{indices[k]}^T.
struct SketchDescription {
  std::vector<Index> indices;
  std::vector<double> scales;
  Index source_dim = 0;

  Index size() const { return static_cast<Index>(indices.size()); }
  /// Dense r x source_dim matrix.
  Eigen::MatrixXd dense() const;
};

using ProbabilityFn = std::function<double(Index)>;
using IndexSampler = std::function<Index(Rng&)>;

/// r draws from `sampler`; scale 1/sqrt(r p(s)) or 0 when p(s) = 0.
SketchDescription draw_sketch(const ProbabilityFn& p, const IndexSampler& sampler, Index r, Index source_dim,
                              Rng& rng);
SketchDescription draw_sketch(const Distribution& p, const IndexSampler& sampler, Index r, Rng& rng);

/// Importance sketch from the bound's row-norm sampler, p = p_row(Abar).
SketchDescription sketch_from_matrix_access(const OversampledMatrixAccess& a, Index r, Rng& rng);

/// A fair coin picks the row sampler of A or of B; p = (p_row(Abar) + p_row(Bbar)) / 2.
SketchDescription joint_sketch(const OversampledMatrixAccess& a, const OversampledMatrixAccess& b, Index r,
                               Rng& rng);

Mat apply_sketch(const SketchDescription& s, const Mat& a);
Mat apply_sketch(const SketchDescription& s, const OversampledMatrixAccess& a);

struct FrobeniusCheck {
  double sketched_sq = 0.0;   // ||SA||_F^2
  double exact_sq = 0.0;      // ||A||_F^2
  double deviation_bound = 0.0;
  bool within_bound = false;  // | ||SA||^2 - ||A||^2 | <= deviation_bound
  double max_row_sq = 0.0;
  double row_bound = 0.0;     // phi ||A||_F^2 / r
  bool rows_within_bound = false;
};

double frobenius_deviation_bound(double exact_sq, double phi, double epsilon, double delta, Index r);
FrobeniusCheck frobenius_check(const SketchDescription& s, const Mat& a, double phi, double epsilon, double delta);

/// Rows j of X whose magnitudes fall under the one-sided threshold:
/// ||Y(j)|| >= ||Y||_F / (sqrt(2 phi eps) ||X||_F) * ||X(j)||. Empty set when eps = 0.
std::vector<bool> one_sided_threshold_set(const Mat& x, const Mat& y, double epsilon, double phi);

/// X^dag Sbar^dag Sbar Y, where Sbar zeroes the rows of S sampling an index in
/// the threshold set. S must be an importance sketch of X.
Mat matmul_one_sided(const Mat& x, const Mat& y, const SketchDescription& s, double epsilon, double phi);
double one_sided_bound(double epsilon, double phi, Index r, double delta, double x_frob, double y_frob);

/// X^dag S^dag S Y for a joint sketch of X and Y.
Mat matmul_joint(const Mat& x, const Mat& y, const SketchDescription& s);
double joint_bound(double epsilon, double phi_x, double phi_y, Index r, double delta, double x_frob,
                   double y_frob);

// ---------------------------------------------------------------------------
// Sketched singular value transformation

/// f with f(0) = 0 and fbar(x) = f(x)/x (fbar(0) the limit), both Lipschitz on
/// [domain_lo, domain_hi].
struct SmoothFunction {
  std::string name;
  std::function<Complex(double)> f;
  std::function<Complex(double)> fbar;
  double lipschitz = 0.0;
  double lipschitz_bar = 0.0;
  double fbar_max = 0.0;
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
};

SmoothFunction identity_function();
/// x^2 with constants valid on [0, domain_max].
SmoothFunction square_function(double domain_max);

struct SvtRequirements {
  double epsilon_max = 0.0;  // largest admissible epsilon
  double r_min = 0.0;
  double c_min = 0.0;
};

/// Admissible epsilon and minimal sketch sizes for the sketched SVT guarantee,
/// with phi' = 2 phi. chi = infinity drops the spectral-slack terms.
SvtRequirements svt_requirements(double phi, double frobenius, const SmoothFunction& f, double gamma, double delta,
                                 double chi);

struct SvtParams {
  double gamma = 0.1;
  double delta = 0.1;
  double chi = std::numeric_limits<double>::infinity();
  Index r = 0;  // 0 selects the requirement-derived size
  Index c = 0;
  bool enforce_epsilon = true;
  int max_attempts = 3;
};

/// Result of the sketched SVT: R = SA, C = R T^dag with T a sketch of R^dag,
/// and the eigendecomposition of CC^dag.
///
/// CC^dag vanishes off range(R), so eigenpairs are computed on an orthonormal
/// basis of range(R) (rank <= n); f(0)-terms on the complement are handled
/// analytically in fbar_matrix and apply_fbar.
class SvtSketchHandle {
 public:
  SketchDescription row_sketch;     // S
  SketchDescription column_sketch;  // T, over the columns of A
  Mat sketched_rows;                // R, r x n
  RealVec eigenvalues;              // clamped, ascending
  Mat eigenvectors;                 // r x k, orthonormal columns
  Vec fbar_values;                  // fbar at the clamped eigenvalues
  Complex fbar_at_zero;
  int attempts = 0;
  double sketched_frobenius_sq = 0.0;
  double phi_rows = 1.0;            // bound factor of the SA access
  std::shared_ptr<const OversampledMatrixAccess> rows_access;     // OSQ(R)
  std::shared_ptr<const OversampledMatrixAccess> columns_access;  // OSQ(R^dag)

  Index r() const { return sketched_rows.rows(); }
  Index c() const { return column_sketch.size(); }

  /// C = R T^dag (r x c), materialized on demand.
  Mat c_matrix() const;
  /// fbar(CC^dag), r x r.
  Mat fbar_matrix() const;
  /// fbar(CC^dag) x for x in C^r.
  Vec apply_fbar(const Vec& x) const;
  /// R^dag fbar(CC^dag) R, n x n.
  Mat transform_matrix() const;
  /// R^dag fbar(CC^dag) R b.
  Vec apply(const Vec& b) const;
};

SvtSketchHandle svt_sketch(const OversampledMatrixAccess& a, const SmoothFunction& f, const SvtParams& params,
                           Rng& rng);

}  // namespace dequant
