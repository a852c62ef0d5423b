// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dequant/applications.hh"
#include "dequant/estimators.hh"
#include "dequant/experiment.hh"
#include "dequant/instances.hh"
#include "dequant/oracle.hh"
#include "dequant/perturbation.hh"
#include "dequant/sketching.hh"
#include "dequant/sparse.hh"

using namespace dequant;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ExperimentConfig config_of(const std::string& pipeline, Index trials, std::vector<double> epsilons,
                           std::map<std::string, std::string> params = {}) {
  ExperimentConfig cfg;
  cfg.pipeline = pipeline;
  cfg.trials = trials;
  cfg.epsilons = std::move(epsilons);
  cfg.params = std::move(params);
  return cfg;
}

double pass_rate(const std::vector<TrialRecord>& rows, double epsilon) {
  double total = 0.0, passed = 0.0;
  for (const auto& row : rows) {
    if (row.epsilon != epsilon) continue;
    total += 1.0;
    passed += row.pass ? 1.0 : 0.0;
  }
  return total > 0.0 ? passed / total : 0.0;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

Distribution length_squared(const Vec& v) {
  Distribution p(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(v(i)) / v.squaredNorm();
  return p;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

struct Verdict {
  bool pass;
  std::string detail;
};

// ---------------------------------------------------------------------------

Verdict tv_machinery() {
  const Index n = 10000;
  Rng rng(101);
  const Vec u = gaussian_vector(n, rng, true);
  const Vec target = gaussian_vector(n, rng, true);
  const Distribution ideal = length_squared(u);
  bool ok = true;
  double worst_excess = -1.0, slowest = 0.0;
  for (auto kind : {PerturbationKind::MassShiftToLightest, PerturbationKind::MassShiftToHeaviest,
                    PerturbationKind::AdversarialAgainstThreshold, PerturbationKind::UniformMix}) {
    for (double eps : {0.0, 0.01, 0.05, 0.1}) {
      PerturbationModel model{kind, eps, target};
      const auto start = Clock::now();
      const auto out = perturb_distribution(ideal, u, model);
      const double tv = tv_distance(out.p_tilde, ideal);
      const double elapsed = seconds_since(start);
      slowest = std::max(slowest, elapsed);
      worst_excess = std::max(worst_excess, tv - eps);
      ok = ok && tv <= eps + 1e-12 && elapsed < 1.0;
    }
  }
  return {ok, fmt("max(TV - eps) = %.3g, slowest %.3f s at n = 1e4", worst_excess, slowest)};
}

Verdict inner_product() {
  const double eps = 0.02, xi = 0.05, delta = 0.01;
  const int trials = 200;
  Rng root(102);
  const auto start = Clock::now();
  int within = 0, bias_ok = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    const Vec u = unit_vector(1000, rng);
    const Vec v = unit_vector(1000, rng);
    const double nu_hat = v.norm();
    PerturbationModel model{PerturbationKind::AdversarialAgainstThreshold, eps, v};
    model.ratio_cap = nu_hat / (std::sqrt(2.0 * eps) * u.norm());
    const auto access = perturb(build_exact_vector_access(u), model);
    const QueryFn vq = [&v](Index i) { return v(i); };
    const Complex estimate = inner_product_sq(*access, vq, nu_hat, EstimationParams::defaults(xi, delta), rng);
    within += std::abs(estimate - inner(u, v)) <= inner_product_sq_bound(eps, xi, u.norm(), nu_hat);
    const auto moments = exact_inner_product_moments(u, v, access->sampler_distribution(), eps, nu_hat);
    bias_ok += std::abs(moments.mean - inner(u, v)) <= 2.0 * std::sqrt(2.0 * eps) * u.norm() * nu_hat + 1e-12;
  }
  const double elapsed = seconds_since(start);
  const double rate = within / static_cast<double>(trials);
  return {rate >= 0.99 && bias_ok == trials && elapsed < 30.0,
          fmt("bound held in %.3f of 200, exact bias within bound in %g of 200, %.1f s", rate, bias_ok, elapsed)};
}

Verdict matmul() {
  const auto one = run_experiment(config_of("matmul_one_sided", 200, {0.02}), 103);
  const auto joint = run_experiment(config_of("matmul_joint", 200, {0.02}), 104);
  Rng rng(105);
  double worst = 0.0;
  for (Index m : {3, 6, 12}) {
    const Mat x = gaussian_matrix(m, 3, rng, true);
    const Mat y = gaussian_matrix(m, 2, rng, true);
    for (const Mat& rhs : {x, y}) {
      const Distribution p = length_squared(Vec(x.rowwise().norm().cast<Complex>()));
      for (Index r : {1, 2}) worst = std::max(worst, (enumerate_sketch_expectation(x, rhs, p, p, r) - x.adjoint() * rhs).norm());
    }
  }
  const bool ok = one.pass_rate >= 0.95 && joint.pass_rate >= 0.95 && worst < 1e-10;
  return {ok, fmt("one-sided %.3f, joint %.3f of 200; enumeration bias %.2g", one.pass_rate, joint.pass_rate, worst)};
}

Verdict frobenius() {
  const double eps = 0.05, delta = 0.05;
  const Index r = 200;
  const int trials = 50;  // 50 x 200 = 1e4 drawn rows
  Rng root(106);
  int rows_ok = 0, rows_total = 0, concentrated = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    const Mat a = gaussian_matrix(50, 40, rng);
    const auto access = exact_oversampled(perturb(*build_matrix_access(a), {PerturbationKind::MassShiftToLightest, eps}));
    const auto s = sketch_from_matrix_access(access, r, rng);
    const auto check = frobenius_check(s, a, 1.0, eps, delta);
    for (std::size_t k = 0; k < s.indices.size(); ++k) {
      const double row_sq = s.scales[k] * s.scales[k] * a.row(s.indices[k]).squaredNorm();
      rows_ok += row_sq <= check.row_bound * (1.0 + 1e-12);
      ++rows_total;
    }
    concentrated += check.within_bound;
  }
  const double rate = concentrated / static_cast<double>(trials);
  return {rows_ok == rows_total && rate >= 0.95,
          fmt("rows within bound %g of %g; concentration %.3f of 50 at eps = .05", rows_ok, rows_total, rate)};
}

Verdict rejection() {
  const auto start = Clock::now();
  Rng rng(107);
  bool closed_ok = true;
  double worst_tv_ratio = 0.0, worst_acc = 0.0;
  const Index n = 50;
  for (double m : {1.0, 2.0, 5.0}) {
    for (double eps : {0.01, 0.05, 0.1, 0.25, 0.5}) {
      if (eps * m > 0.5) continue;
      for (auto kind : {PerturbationKind::MassShiftToLightest, PerturbationKind::MassShiftToHeaviest,
                        PerturbationKind::UniformMix}) {
        // m p2 = p1 + (m - 1) q dominates p1.
        const Distribution p1 = length_squared(gaussian_vector(n, rng));
        const Distribution q = length_squared(gaussian_vector(n, rng));
        Distribution p2(static_cast<std::size_t>(n));
        for (std::size_t j = 0; j < p2.size(); ++j) p2[j] = (p1[j] + (m - 1.0) * q[j]) / m;
        Vec root2(n);
        for (Index j = 0; j < n; ++j) root2(j) = std::sqrt(p2[static_cast<std::size_t>(j)]);
        const auto p2t = perturb_distribution(p2, root2, {kind, eps}).p_tilde;
        const auto out = rejection_closed_form(p1, p2, p2t, m);
        const double tv = tv_distance(out.output, p1);
        worst_tv_ratio = std::max(worst_tv_ratio, tv / (3.0 * eps * m));
        worst_acc = std::max(worst_acc, std::abs(out.acceptance - 1.0 / m) / eps);
        closed_ok = closed_ok && tv <= 3.0 * eps * m + 1e-12 && std::abs(out.acceptance - 1.0 / m) <= eps + 1e-12;
      }
    }
  }
  const auto norm = run_experiment(config_of("rejection", 200, {0.0}), 108);
  const double elapsed = seconds_since(start);
  return {closed_ok && norm.pass_rate >= 0.99 && elapsed < 10.0,
          fmt("max TV/(3 eps m) = %.3f, max |acc - 1/m|/eps = %.3f, norm estimate %.3f of 200, %.1f s", worst_tv_ratio,
              worst_acc, norm.pass_rate, elapsed)};
}

Verdict svt_sweep() {
  const SvtRequirements req = svt_requirements(1.0, 1.0, square_function(1.0), 0.05, 0.1,
                                               std::numeric_limits<double>::infinity());
  std::printf("      default sizes for gamma = .05, delta = .1: r >= %.3g, c >= %.3g, eps <= %.3g (not executed)\n",
              req.r_min, req.c_min, req.epsilon_max);
  std::vector<double> medians;
  for (Index r : {200, 400, 800}) {
    const auto report = run_experiment(
        config_of("svt_sketch", 31, {0.0}, {{"r", std::to_string(r)}, {"c", std::to_string(2 * r)}}), 109);
    std::vector<double> errors;
    for (const auto& row : report.rows) errors.push_back(row.measured_error);
    medians.push_back(median(errors));
  }
  const bool ok = medians[0] >= medians[1] && medians[1] >= medians[2] && medians[2] <= 0.05;
  return {ok, fmt("medians %.4f, %.4f, %.4f over (200,400), (400,800), (800,1600)", medians[0], medians[1], medians[2])};
}

Verdict qsvt() {
  const auto report = run_experiment(config_of("qsvt", 50, {0.0, 1e-4}), 110);
  const double exact = pass_rate(report.rows, 0.0), perturbed = pass_rate(report.rows, 1e-4);
  return {exact >= 0.9 && exact - perturbed <= 0.1,
          fmt("pass rate %.2f at eps = 0, %.2f at eps = 1e-4", exact, perturbed)};
}

Verdict sparse() {
  const double eta = 0.2, eps = eta * eta / 9.0;
  const auto report = run_experiment(config_of("sparse_qsvt", 200, {eps}, {{"xi", "0.05"}}), 111);
  Rng rng(112);
  double worst = 0.0;
  const EvenPolynomial p({0.2, 0.5, 0.3});
  for (int t = 0; t < 10; ++t) {
    const SparseMatrix a = sparse_instance(30, 2, rng);
    const Vec u = unit_vector(30, rng);
    const Vec dense = dense_svt(a.dense(), p) * u;
    for (Index j = 0; j < 30; ++j)
      worst = std::max(worst, std::abs(sparse_poly_query(a, [&u](Index i) { return u(i); }, p, j, 2) - dense(j)));
  }
  return {report.pass_rate >= 0.95 && worst <= 1e-10,
          fmt("bound held in %.3f of 200 at eps = eta^2/9; max query deviation %.2g", report.pass_rate, worst)};
}

Verdict clustering() {
  const double eta = 0.1, eps = eta * eta / 25.0;
  const auto report = run_experiment(config_of("clustering", 200, {eps}, {{"xi", "0.05"}}), 113);
  Rng rng(114);
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const Mat m = gaussian_matrix(20, 10, rng);
    const Vec w = gaussian_vector(20, rng);
    const auto lift = make_clustering_lift(build_matrix_access(m), w);
    Complex dot = 0.0;
    double u_sq = 0.0, v_sq = 0.0;
    for (Index k = 0; k < lift.u->size(); ++k) {
      dot += lift.u->query(k) * std::conj(lift.v(k));
      u_sq += std::norm(lift.u->query(k));
      v_sq += std::norm(lift.v(k));
    }
    const double target = (w.transpose() * m).squaredNorm();
    worst = std::max({worst, std::abs(dot - target) / target, std::abs(std::sqrt(u_sq) - m.squaredNorm()) / u_sq,
                      std::abs(std::sqrt(v_sq) - w.squaredNorm()) / w.squaredNorm()});
  }
  return {report.pass_rate >= 0.99 && worst <= 1e-10,
          fmt("bound held in %.3f of 200 at eps = eta^2/25; lift identities to %.2g", report.pass_rate, worst)};
}

Verdict recommendation() {
  const int instances = 5;
  const Index draws = 100000;
  Rng root(115);
  double worst_tv = 0.0, worst_row = 0.0;
  bool ok = true;
  for (int t = 0; t < instances; ++t) {
    Rng rng = root.split(static_cast<std::uint64_t>(t));
    std::vector<double> spectrum{1.0, 0.9, 0.8, 0.15, 0.1};
    double sq = 0.0;
    for (double s : spectrum) sq += s * s;
    for (double& s : spectrum) s /= std::sqrt(sq);
    const Mat a = spectrum_matrix(60, 50, spectrum, rng);
    RecommendationParams rp;
    rp.sigma = 0.25;
    rp.r = 2000;
    rp.c = 4000;
    rp.r_joint = 4000;
    rp.enforce_epsilon = false;
    const auto oracle = exact_truncation(a, rp.sigma, rp.xi, TruncationMode::LowRank);
    if (!std::holds_alternative<Mat>(oracle)) return {false, "instance has a singular value in the band"};
    const Vec target = std::get<Mat>(oracle).row(0).transpose();
    const auto res = recommendation_sample(exact_oversampled(build_matrix_access(a)), 0, rp, rng);
    Distribution freq(50, 0.0);
    Index drawn = 0;
    for (Index k = 0; k < draws; ++k) {
      if (const auto j = res.access->sample(rng)) {
        freq[static_cast<std::size_t>(*j)] += 1.0;
        ++drawn;
      }
    }
    for (double& f : freq) f /= static_cast<double>(drawn);
    const double tv = tv_distance(freq, length_squared(target));
    const double row_error = (res.approx_row - target).norm();
    worst_tv = std::max(worst_tv, tv);
    worst_row = std::max(worst_row, row_error / (rp.nu * a.norm()));
    ok = ok && tv <= 0.1 && row_error <= rp.nu * a.norm();
  }
  return {ok, fmt("max TV over 1e5 draws %.4f; max row error / (nu ||A||_F) %.3f on %g instances", worst_tv, worst_row,
                  instances)};
}

Verdict inversion() {
  const auto report = run_experiment(config_of("inversion", 50, {0.0}), 116);
  return {report.pass_rate >= 0.9, fmt("relative error <= .1 in %.2f of 50", report.pass_rate)};
}

Verdict reproducibility() {
  bool ok = true;
  for (const std::string pipeline : {"inner_product", "matmul_joint", "svt_sketch", "sparse_qsvt", "recommendation"}) {
    const auto cfg = config_of(pipeline, 4, {0.0, 0.01}, pipeline == "sparse_qsvt" ? std::map<std::string, std::string>{{"xi", "0.05"}}
                                                                                    : std::map<std::string, std::string>{});
    std::ostringstream first, second, threaded;
    write_report_csv(first, run_experiment(cfg, 117, 1));
    write_report_csv(second, run_experiment(cfg, 117, 1));
    write_report_csv(threaded, run_experiment(cfg, 117, 2));
    ok = ok && first.str() == second.str() && first.str() == threaded.str();
  }
  return {ok, "CSV byte-identical across reruns and thread counts for 5 pipelines"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"AC1 tv-machinery", tv_machinery},
      {"AC2 inner-product", inner_product},
      {"AC3 matmul", matmul},
      {"AC4 frobenius-sketch", frobenius},
      {"AC5 rejection-sampling", rejection},
      {"AC6 svt-sketch", svt_sweep},
      {"AC7 qsvt", qsvt},
      {"AC8 sparse-qsvt", sparse},
      {"AC9 clustering", clustering},
      {"AC10 recommendation", recommendation},
      {"AC11 inversion", inversion},
      {"AC12 reproducibility", reproducibility},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = Clock::now();
    Verdict v{false, ""};
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
    failures += !v.pass;
  }
  return failures == 0 ? 0 : 1;
}
