#include "dequant/experiment.hh"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dequant/access_transforms.hh"
#include "dequant/applications.hh"
#include "dequant/estimators.hh"
#include "dequant/instances.hh"
#include "dequant/oracle.hh"
#include "dequant/perturbation.hh"
#include "dequant/sketching.hh"

namespace dequant {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double x = std::stod(trim(text), &used);
    if (used == trim(text).size()) return x;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config: '" + key + "' is not a number: '" + text + "'");
}

std::vector<double> to_numbers(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_number(key, item));
  if (out.empty()) throw std::invalid_argument("config: '" + key + "' is empty");
  return out;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// Keys shared by every pipeline.
const std::vector<std::string> kCommonKeys = {"model", "enforce_epsilon"};

const std::map<std::string, std::vector<std::string>>& key_table() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"inner_product", {"n", "xi", "delta", "batch_size", "batches"}},
      {"matmul_one_sided", {"m", "cols_x", "cols_y", "r", "phi", "delta"}},
      {"matmul_joint", {"m", "cols_x", "cols_y", "r", "delta"}},
      {"frobenius_sketch", {"m", "n", "r", "delta"}},
      {"rejection", {"n", "phi", "eta", "delta"}},
      {"svt_sketch", {"m", "n", "singular_values", "r", "c", "gamma", "delta"}},
      {"qsvt", {"m", "n", "singular_values", "coefficients", "eta", "delta", "r", "c", "r_prime", "target_floor"}},
      {"sparse_qsvt", {"n", "s", "coefficients", "eta", "xi", "delta", "batch_size", "batches"}},
      {"clustering", {"n", "d", "eta", "xi", "delta", "batch_size", "batches"}},
      {"recommendation", {"m", "n", "singular_values", "row", "sigma", "xi", "nu", "delta", "r", "c", "r_prime"}},
      {"inversion",
       {"m", "n", "singular_values", "sigma", "xi", "eta", "delta", "r", "c", "bilinear_xi", "batch_size",
        "batches"}},
  };
  return table;
}

PerturbationModel model_from(const ExperimentConfig& cfg, double epsilon, const std::string& fallback) {
  PerturbationModel model;
  model.kind = perturbation_kind_from_string(cfg.text("model", fallback));
  model.budget = epsilon;
  return model;
}

std::vector<double> normalized(std::vector<double> values) {
  double sq = 0.0;
  for (double v : values) sq += v * v;
  for (double& v : values) v /= std::sqrt(sq);
  return values;
}

// Dense A with exact matrix access, perturbed when epsilon > 0.
OversampledMatrixAccess matrix_access_for(const Mat& a, const ExperimentConfig& cfg, double epsilon) {
  auto exact = build_matrix_access(a);
  if (epsilon <= 0.0) return exact_oversampled(exact);
  return exact_oversampled(perturb(*exact, model_from(cfg, epsilon, "mass-shift-to-lightest")));
}

OversampledVectorAccess vector_access_for(const Vec& b, const ExperimentConfig& cfg, double epsilon) {
  auto exact = build_exact_vector_access(b);
  if (epsilon <= 0.0) return exact_oversampled(exact);
  return exact_oversampled(perturb(exact, model_from(cfg, epsilon, "mass-shift-to-lightest")));
}

using TrialFn = std::function<TrialRecord(const ExperimentConfig&, double, Rng&, Rng&)>;

TrialRecord inner_product_trial(const ExperimentConfig& cfg, double eps, Rng& inst, Rng& algo) {
  const Index n = cfg.integer("n", 1000);
  const Vec u = unit_vector(n, inst);
  const Vec v = unit_vector(n, inst);
  const double nu_hat = v.norm();
  PerturbationModel model = model_from(cfg, eps, "adversarial-against-threshold");
  model.target = v;
  if (eps > 0.0) model.ratio_cap = nu_hat / (std::sqrt(2.0 * eps) * u.norm());
  const auto access = perturb(build_exact_vector_access(u), model);
  EstimationParams ep;
  ep.xi = cfg.number("xi", 0.05);
  ep.delta = cfg.number("delta", 0.01);
  ep.batch_size = cfg.integer("batch_size", 0);
  ep.batches = cfg.integer("batches", 0);
  const QueryFn vq = [&v](Index i) { return v(i); };
  TrialRecord rec;
  rec.measured_error = std::abs(inner_product_sq(*access, vq, nu_hat, ep, algo) - inner(u, v));
  rec.theorem_bound = inner_product_sq_bound(eps, ep.xi, u.norm(), nu_hat);
  return rec;
}

TrialRecord matmul_trial(const ExperimentConfig& cfg, double eps, Rng& inst, Rng& algo, bool joint) {
  const Index m = cfg.integer("m", 30);
  const Mat x = gaussian_matrix(m, cfg.integer("cols_x", 10), inst);
  const Mat y = gaussian_matrix(m, cfg.integer("cols_y", 8), inst);
  const Index r = cfg.integer("r", 2000);
  const double delta = cfg.number("delta", 0.05);
  const Mat exact = x.adjoint() * y;
  TrialRecord rec;
  rec.r = r;
  const auto xa = matrix_access_for(x, cfg, eps);
  if (joint) {
    const auto ya = matrix_access_for(y, cfg, eps);
    const auto s = joint_sketch(xa, ya, r, algo);
    rec.measured_error = (matmul_joint(x, y, s) - exact).norm();
    rec.theorem_bound = joint_bound(eps, 1.0, 1.0, r, delta, x.norm(), y.norm());
  } else {
    const double phi = cfg.number("phi", 1.0);
    const auto s = sketch_from_matrix_access(xa, r, algo);
    rec.measured_error = (matmul_one_sided(x, y, s, eps, phi) - exact).norm();
    rec.theorem_bound = one_sided_bound(eps, phi, r, delta, x.norm(), y.norm());
  }
  return rec;
}

TrialRecord frobenius_trial(const ExperimentConfig& cfg, double eps, Rng& inst, Rng& algo) {
  const Mat a = gaussian_matrix(cfg.integer("m", 50), cfg.integer("n", 40), inst);
  const Index r = cfg.integer("r", 200);
  const auto access = matrix_access_for(a, cfg, eps);
  const auto s = sketch_from_matrix_access(access, r, algo);
  const auto check = frobenius_check(s, a, 1.0, eps, cfg.number("delta", 0.05));
  TrialRecord rec;
  rec.r = r;
  rec.measured_error = std::abs(check.sketched_sq - check.exact_sq);
  rec.theorem_bound = check.deviation_bound;
  rec.pass = check.within_bound && check.rows_within_bound;
  return rec;
}

TrialRecord rejection_trial(const ExperimentConfig& cfg, double eps, Rng& inst, Rng& algo) {
  const Index n = cfg.integer("n", 200);
  const double phi = cfg.number("phi", 2.0);
  const double eta = cfg.number("eta", 0.1);
  const Vec u = gaussian_vector(n, inst);
  // ubar(j)^2 = |u(j)|^2 + (phi - 1) ||u||^2 w_j with random weights summing to 1.
  RealVec weights(n);
  for (Index j = 0; j < n; ++j) weights(j) = inst.uniform() + 1e-3;
  weights /= weights.sum();
  Vec ubar(n);
  for (Index j = 0; j < n; ++j) ubar(j) = std::sqrt(std::norm(u(j)) + (phi - 1.0) * u.squaredNorm() * weights(j));
  auto bound = build_exact_vector_access(ubar);
  if (eps > 0.0) bound = perturb(bound, model_from(cfg, eps, "mass-shift-to-lightest"));
  const auto osq = wrap_oversampled([&u](Index j) { return u(j); }, bound);
  const auto rsq = to_randomized_access(osq, osq.phi(), cfg.number("delta", 0.01), eta);
  TrialRecord rec;
  rec.r = rsq.norm_trials();
  rec.measured_error = std::abs(rsq.estimate_norm(algo) - u.norm());
  rec.theorem_bound = eta * u.norm();
  return rec;
}

Mat spectrum_instance(const ExperimentConfig& cfg, Rng& inst, Index m, Index n, const std::vector<double>& fallback) {
  return spectrum_matrix(cfg.integer("m", m), cfg.integer("n", n),
                         normalized(cfg.numbers("singular_values", fallback)), inst);
}

TrialRecord svt_trial(const ExperimentConfig& cfg, double eps, Rng& inst, Rng& algo) {
  const Mat a = spectrum_instance(cfg, inst, 50, 40, {1.0, 0.5, 0.3, 0.2, 0.1});
  const auto f = square_function(1.0);
  SvtParams sp;
  sp.gamma = cfg.number("gamma", 0.05);
  sp.delta = cfg.number("delta", 0.1);
  sp.r = cfg.integer("r", 200);
  sp.c = cfg.integer("c", 400);
  sp.enforce_epsilon = cfg.integer("enforce_epsilon", 0) != 0;
  const auto h = svt_sketch(matrix_access_for(a, cfg, eps), f, sp, algo);
  TrialRecord rec;
  rec.r = h.r();
  rec.c = h.c();
  rec.measured_error = (h.transform_matrix() - dense_svt(a, f)).norm();
  rec.theorem_bound = sp.gamma;
  return rec;
}

TrialRecord qsvt_trial(const ExperimentConfig& cfg, double eps, Rng& inst, Rng& algo) {
  const Mat a = spectrum_instance(cfg, inst, 50, 40, {1.0, 0.5, 0.3, 0.2, 0.1});
  const Index rank = static_cast<Index>(cfg.numbers("singular_values", {1, 1, 1, 1, 1}).size());
  const EvenPolynomial p(cfg.numbers("coefficients", {0.0, 1.5, -0.5}));
  const Mat transform = dense_svt(a, p);
  // Sketch sizes grow like 1 / ||p(sqrt(A^dag A)) b||^2, so fixed sizes need a floor on it.
  const double floor = cfg.number("target_floor", 0.2);
  Vec b = row_space_vector(a, rank, inst);
  for (int k = 0; k < 1000 && (transform * b).norm() < floor; ++k) b = row_space_vector(a, rank, inst);
  if ((transform * b).norm() < floor) throw std::domain_error("no right-hand side meets the target floor");
  const Vec target = transform * b;
  QsvtParams qp;
  qp.eta = cfg.number("eta", 0.1);
  qp.delta = cfg.number("delta", 0.1);
  qp.norm_lower_bound = target.norm();
  qp.r = cfg.integer("r", 2000);
  qp.c = cfg.integer("c", 4000);
  qp.r_joint = cfg.integer("r_prime", 10000);
  qp.enforce_epsilon = cfg.integer("enforce_epsilon", 0) != 0;
  const auto res = qsvt_lowrank(matrix_access_for(a, cfg, eps), vector_access_for(b, cfg, eps), p, qp, algo);
  TrialRecord rec;
  rec.r = res.r;
  rec.c = res.c;
  rec.measured_error = (res.materialize() - target).norm() / target.norm();
  rec.theorem_bound = qp.eta;
  if (res.epsilon_violation) rec.status = "epsilon-violation";
  return rec;
}

TrialRecord sparse_qsvt_trial(const ExperimentConfig& cfg, double eps, Rng& inst, Rng& algo) {
  const Index n = cfg.integer("n", 30);
  const SparseMatrix a = sparse_instance(n, cfg.integer("s", 2), inst);
  const EvenPolynomial p(cfg.numbers("coefficients", {0.2, 0.5, 0.3}));
  const Vec u = unit_vector(n, inst);
  const Vec v = unit_vector(n, inst);
  auto v_access = build_exact_vector_access(v);
  if (eps > 0.0) v_access = perturb(v_access, model_from(cfg, eps, "mass-shift-to-lightest"));
  SparseQsvtParams sp;
  sp.eta = cfg.number("eta", 0.2);
  sp.xi = cfg.number("xi", 0.05);
  sp.delta = cfg.number("delta", 0.0);
  sp.batch_size = cfg.integer("batch_size", 0);
  sp.batches = cfg.integer("batches", 0);
  sp.enforce_epsilon = cfg.integer("enforce_epsilon", 0) != 0;
  const Complex exact = (v.adjoint() * dense_svt(a.dense(), p) * u)(0);
  const auto res = sparse_qsvt(a, [&u](Index j) { return u(j); }, *v_access, p, sp, algo);
  TrialRecord rec;
  rec.measured_error = std::abs(res.estimate - exact);
  rec.theorem_bound = sp.eta;
  if (res.epsilon_violation) rec.status = "epsilon-violation";
  return rec;
}

TrialRecord clustering_trial(const ExperimentConfig& cfg, double eps, Rng& inst, Rng& algo) {
  const Mat m = gaussian_matrix(cfg.integer("n", 20), cfg.integer("d", 10), inst);
  const Vec w = gaussian_vector(m.rows(), inst);
  std::shared_ptr<const MatrixAccess> access = build_matrix_access(m);
  if (eps > 0.0) access = perturb(*access, model_from(cfg, eps, "mass-shift-to-lightest"));
  ClusteringParams cp;
  cp.eta = cfg.number("eta", 0.1);
  cp.xi = cfg.number("xi", 0.0);
  cp.delta = cfg.number("delta", 0.01);
  cp.batch_size = cfg.integer("batch_size", 0);
  cp.batches = cfg.integer("batches", 0);
  cp.enforce_epsilon = cfg.integer("enforce_epsilon", 0) != 0;
  const auto res = supervised_clustering(access, w, cp, algo);
  TrialRecord rec;
  rec.measured_error = std::abs(res.estimate - (w.transpose() * m).squaredNorm());
  rec.theorem_bound = cp.eta * m.squaredNorm() * w.squaredNorm();
  if (res.epsilon_violation) rec.status = "epsilon-violation";
  return rec;
}

TrialRecord recommendation_trial(const ExperimentConfig& cfg, double eps, Rng& inst, Rng& algo) {
  const Mat a = spectrum_instance(cfg, inst, 60, 50, {1.0, 0.9, 0.8, 0.15, 0.1});
  RecommendationParams rp;
  rp.sigma = cfg.number("sigma", 0.25);
  rp.xi = cfg.number("xi", 0.2);
  rp.nu = cfg.number("nu", 0.1);
  rp.delta = cfg.number("delta", 0.1);
  rp.r = cfg.integer("r", 2000);
  rp.c = cfg.integer("c", 4000);
  rp.r_joint = cfg.integer("r_prime", 4000);
  rp.enforce_epsilon = cfg.integer("enforce_epsilon", 0) != 0;
  const Index row = cfg.integer("row", 0);
  const auto oracle = exact_truncation(a, rp.sigma, rp.xi, TruncationMode::LowRank);
  if (!std::holds_alternative<Mat>(oracle)) throw std::domain_error("instance has a singular value in the band");
  const Vec target = std::get<Mat>(oracle).row(row).transpose();
  const auto res = recommendation_sample(matrix_access_for(a, cfg, eps), row, rp, algo);
  TrialRecord rec;
  rec.r = res.r;
  rec.c = res.c;
  rec.measured_error = (res.approx_row - target).norm();
  rec.theorem_bound = rp.nu * a.norm();
  if (res.epsilon_violation) rec.status = "epsilon-violation";
  return rec;
}

TrialRecord inversion_trial(const ExperimentConfig& cfg, double eps, Rng& inst, Rng& algo) {
  const Mat a = spectrum_instance(cfg, inst, 60, 50, {1.0, 1.0, 1.0, 1.0, 1.0});
  InversionParams ip;
  ip.sigma = cfg.number("sigma", 0.4);
  ip.xi = cfg.number("xi", 0.2);
  ip.eta = cfg.number("eta", 0.1);
  ip.delta = cfg.number("delta", 0.1);
  ip.r = cfg.integer("r", 4000);
  ip.c = cfg.integer("c", 8000);
  ip.bilinear_xi = cfg.number("bilinear_xi", 0.4);
  ip.bilinear_batch_size = cfg.integer("batch_size", 0);
  ip.bilinear_batches = cfg.integer("batches", 9);
  ip.enforce_epsilon = cfg.integer("enforce_epsilon", 0) != 0;
  const Vec b = column_space_vector(a, ip.sigma, inst);
  const auto oracle = exact_truncation(a, ip.sigma, ip.xi, TruncationMode::PseudoInverse);
  if (!std::holds_alternative<Mat>(oracle)) throw std::domain_error("instance has a singular value in the band");
  const Vec target = std::get<Mat>(oracle) * b;
  const auto res = matrix_inversion(matrix_access_for(a, cfg, eps), b, ip, algo);
  TrialRecord rec;
  rec.r = res.svt.r();
  rec.c = res.svt.c();
  rec.measured_error = (res.solution - target).norm() / target.norm();
  rec.theorem_bound = ip.eta;
  if (res.epsilon_violation) rec.status = "epsilon-violation";
  return rec;
}

const std::map<std::string, TrialFn>& trial_table() {
  static const std::map<std::string, TrialFn> table = {
      {"inner_product", inner_product_trial},
      {"matmul_one_sided",
       [](const ExperimentConfig& c, double e, Rng& i, Rng& a) { return matmul_trial(c, e, i, a, false); }},
      {"matmul_joint",
       [](const ExperimentConfig& c, double e, Rng& i, Rng& a) { return matmul_trial(c, e, i, a, true); }},
      {"frobenius_sketch", frobenius_trial},
      {"rejection", rejection_trial},
      {"svt_sketch", svt_trial},
      {"qsvt", qsvt_trial},
      {"sparse_qsvt", sparse_qsvt_trial},
      {"clustering", clustering_trial},
      {"recommendation", recommendation_trial},
      {"inversion", inversion_trial},
  };
  return table;
}

std::string sanitize(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return s;
}

}  // namespace

double ExperimentConfig::number(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : to_number(key, it->second);
}

Index ExperimentConfig::integer(const std::string& key, Index fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double x = to_number(key, it->second);
  if (x != std::floor(x)) throw std::invalid_argument("config: '" + key + "' must be an integer");
  return static_cast<Index>(x);
}

std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : trim(it->second);
}

std::vector<double> ExperimentConfig::numbers(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : to_numbers(key, it->second);
}

const std::vector<std::string>& pipeline_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, keys] : key_table()) out.push_back(name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& pipeline_keys(const std::string& pipeline) {
  const auto it = key_table().find(pipeline);
  if (it == key_table().end()) throw std::invalid_argument("config: unknown pipeline '" + pipeline + "'");
  return it->second;
}

ExperimentConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  const auto head = tree.get_child_optional("experiment");
  if (!head) throw std::invalid_argument("config: missing [experiment] section");
  ExperimentConfig cfg;
  for (const auto& [key, node] : *head) {
    const std::string value = node.get_value<std::string>();
    if (key == "pipeline") cfg.pipeline = trim(value);
    else if (key == "trials") {
      const double t = to_number(key, value);
      if (t < 1 || t != std::floor(t)) throw std::invalid_argument("config: trials must be a positive integer");
      cfg.trials = static_cast<Index>(t);
    } else if (key == "confidence_floor") cfg.confidence_floor = to_number(key, value);
    else if (key == "epsilon") cfg.epsilons = to_numbers(key, value);
    else throw std::invalid_argument("config: unknown [experiment] key '" + key + "'");
  }
  if (cfg.pipeline.empty()) throw std::invalid_argument("config: missing pipeline");
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be a positive integer");
  if (!(cfg.confidence_floor >= 0.0 && cfg.confidence_floor <= 1.0))
    throw std::invalid_argument("config: confidence_floor must lie in [0, 1]");
  for (double e : cfg.epsilons)
    if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("config: epsilon must lie in [0, 1]");
  const auto& allowed = pipeline_keys(cfg.pipeline);
  for (const auto& [section, node] : tree) {
    if (section == "experiment") continue;
    if (section != cfg.pipeline) throw std::invalid_argument("config: section [" + section + "] does not match the pipeline");
    for (const auto& [key, value] : node) {
      const bool known = std::find(allowed.begin(), allowed.end(), key) != allowed.end() ||
                         std::find(kCommonKeys.begin(), kCommonKeys.end(), key) != kCommonKeys.end();
      if (!known) throw std::invalid_argument("config: unknown key '" + key + "' for " + cfg.pipeline);
      cfg.params[key] = value.get_value<std::string>();
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_config(in);
}

TrialRecord run_trial(const ExperimentConfig& config, double epsilon, Index trial, Rng rng) {
  const auto& fn = trial_table().at(config.pipeline);
  Rng inst = rng.split(1);
  Rng algo = rng.split(2);
  TrialRecord rec;
  try {
    rec = fn(config, epsilon, inst, algo);
    if (rec.status == "ok" || rec.status == "epsilon-violation")
      rec.pass = rec.pass || (config.pipeline != "frobenius_sketch" && rec.measured_error <= rec.theorem_bound);
  } catch (const std::exception& e) {
    rec = TrialRecord{};
    rec.measured_error = std::nan("");
    rec.status = "error:" + sanitize(e.what());
  }
  rec.trial = trial;
  rec.epsilon = epsilon;
  return rec;
}

ExperimentReport run_experiment(const ExperimentConfig& config, std::uint64_t seed, int jobs) {
  pipeline_keys(config.pipeline);
  const Index total = config.trials * static_cast<Index>(config.epsilons.size());
  ExperimentReport report;
  report.pipeline = config.pipeline;
  report.confidence_floor = config.confidence_floor;
  report.rows.resize(static_cast<std::size_t>(total));
  const Rng root(seed);
  std::atomic<Index> next{0};
  auto worker = [&] {
    for (Index t = next++; t < total; t = next++) {
      const double eps = config.epsilons[static_cast<std::size_t>(t / config.trials)];
      report.rows[static_cast<std::size_t>(t)] = run_trial(config, eps, t, root.split(static_cast<std::uint64_t>(t)));
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  Index passed = 0;
  for (const auto& row : report.rows) passed += row.pass ? 1 : 0;
  report.pass_rate = total ? static_cast<double>(passed) / static_cast<double>(total) : 0.0;
  return report;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "trial,pipeline,epsilon,r,c,measured_error,theorem_bound,pass,status\n";
  Index passed = 0;
  for (const auto& row : report.rows) {
    passed += row.pass ? 1 : 0;
    out << row.trial << ',' << report.pipeline << ',' << format_number(row.epsilon) << ',' << row.r << ',' << row.c
        << ',' << format_number(row.measured_error) << ',' << format_number(row.theorem_bound) << ','
        << (row.pass ? 1 : 0) << ',' << row.status << '\n';
  }
  out << "summary," << report.pipeline << ",,,," << format_number(report.pass_rate) << ','
      << format_number(report.confidence_floor) << ',' << (report.meets_floor() ? 1 : 0) << ',' << passed << '/'
      << report.rows.size() << '\n';
}

// ---------------------------------------------------------------------------

std::vector<double> gap_spectrum(Index rank, double sigma, double xi, Rng& rng) {
  const double lo = sigma * (1.0 - xi);
  const double hi = sigma * (1.0 + xi);
  if (hi >= 1.0 && lo <= 0.0) throw std::invalid_argument("gap_spectrum: band covers (0, 1]");
  std::vector<double> values;
  for (Index k = 0; k < rank; ++k) {
    const bool above = hi < 1.0 && (lo <= 0.0 || k % 2 == 0);
    const double u = 0.1 + 0.8 * rng.uniform();
    values.push_back(above ? hi + (1.0 - hi) * u : lo * u);
  }
  std::sort(values.rbegin(), values.rend());
  return values;
}

Mat generate_instance(const GenerateSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  Mat a;
  if (spec.kind == "identity") {
    a = Mat::Identity(spec.m, spec.n);
  } else if (spec.kind == "gaussian") {
    a = gaussian_matrix(spec.m, spec.n, rng);
  } else if (spec.kind == "vector") {
    a = unit_vector(spec.m, rng);
  } else if (spec.kind == "sparse") {
    if (spec.m != spec.n) throw std::invalid_argument("generate: sparse instances are square");
    a = sparse_instance(spec.n, spec.sparsity, rng).dense();
  } else if (spec.kind == "spectrum") {
    std::vector<double> values = spec.spectrum;
    if (values.empty()) {
      if (!spec.gap_sigma) throw std::invalid_argument("generate: spectrum needs singular values or a gap");
      values = gap_spectrum(spec.rank, *spec.gap_sigma, spec.gap_xi, rng);
    }
    for (double v : values)
      if (!(v > 0.0)) throw std::invalid_argument("generate: singular values must be positive");
    a = spectrum_matrix(spec.m, spec.n, values, rng);
  } else {
    throw std::invalid_argument("generate: unknown kind '" + spec.kind + "'");
  }
  if (spec.normalize && a.norm() > 0.0) a /= a.norm();
  return a;
}

}  // namespace dequant
