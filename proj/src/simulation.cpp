#include "cdfpen/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numeric>
#include <limits>
#include <random>
#include <thread>
#include <type_traits>

#include "cdfpen/error.hpp"
#include "cdfpen/report_io.hpp"

namespace cdfpen {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream id reserved for the shared support draw under fixed_support.
constexpr std::uint64_t kSupportStream = 0xFFFFFFFFFFFFFFFFULL;

std::vector<Eigen::Index> draw_support(std::mt19937_64& rng, int p, int k) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(p));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, p - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

ReplicateMetrics evaluate_method(const Replicate& rep, const StandardizedDesign& design,
                                 const Method& method, const PathSpec& grid,
                                 const AdmmConfig& acfg, int index) {
  ReplicateMetrics m;
  m.replicate = index;
  try {
    const PathResult path = fit_path(design, method.path_spec(grid), acfg);
    m.lambda_max = path.lambdas[0];
    std::vector<RocPoint> sweep;
    for (const FitResult& f : path.fits) {
      m.mse.push_back(mse({f.beta}, rep.truth));
      m.fpr.push_back(fpr(f.beta, rep.truth));
      m.tpr.push_back(tpr(f.beta, rep.truth));
      m.nonzeros.push_back(f.nonzeros());
      m.nonconverged_fits += f.converged ? 0 : 1;
      sweep.push_back({m.fpr.back(), m.tpr.back()});
    }
    m.auc = roc_from_points(std::move(sweep)).auc;
  } catch (const Error& e) {
    m = ReplicateMetrics{};
    m.replicate = index;
    m.failed = true;
    m.error = e.what();
  }
  return m;
}

}  // namespace

void Scenario::validate() const {
  if (n < 2) throw ValidationError("scenario n must be >= 2");
  if (p < 1) throw ValidationError("scenario p must be >= 1");
  if (!(n_signal > 0 && n_signal <= p)) throw ValidationError("n_signal must lie in [1, p]");
  if (!(std::abs(rho_toeplitz) < 1.0)) throw ValidationError("|rho_toeplitz| must be < 1");
  if (!(signal_low <= signal_high)) throw ValidationError("signal_low must be <= signal_high");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be > 0");
  if (n_replicates < 1) throw ValidationError("n_replicates must be >= 1");
}

PathSpec Method::path_spec(const PathSpec& grid) const {
  PathSpec spec = grid;
  spec.kind = kind;
  spec.nu_rule = nu_rule;
  spec.gamma = gamma;
  return spec;
}

Method parse_method(const std::string& label, double gamma_scad, double gamma_mcp) {
  Method m;
  m.label = label;
  if (label == "lasso") {
    m.kind = PenaltyKind::Lasso;
  } else if (label == "scad") {
    m.kind = PenaltyKind::Scad;
    m.gamma = gamma_scad;
  } else if (label == "mcp") {
    m.kind = PenaltyKind::Mcp;
    m.gamma = gamma_mcp;
  } else if (label.rfind("cdf-", 0) == 0) {
    m.kind = PenaltyKind::Cdf;
    const std::string rest = label.substr(4);
    if (rest.rfind("nu", 0) == 0 && rest.size() > 2 &&
        (std::isdigit(static_cast<unsigned char>(rest[2])) || rest[2] == '.')) {
      m.nu_rule = parse_nu_rule("fixed:" + rest.substr(2));
    } else {
      m.nu_rule = parse_nu_rule(rest);
    }
  } else {
    throw ValidationError("unknown method '" + label +
                          "' (expected lasso, scad, mcp, cdf-numin, cdf-nubar, cdf-nu<value>)");
  }
  if (m.gamma) m.path_spec(PathSpec{}).validate();
  return m;
}

std::vector<Method> default_methods(double gamma_scad, double gamma_mcp) {
  std::vector<Method> out;
  for (const char* label : {"scad", "mcp", "cdf-nu3", "cdf-nubar", "cdf-numin", "lasso"}) {
    out.push_back(parse_method(label, gamma_scad, gamma_mcp));
  }
  return out;
}

Eigen::MatrixXd toeplitz_sigma(int p, double rho) {
  if (!(std::abs(rho) < 1.0)) throw ValidationError("Toeplitz rho must satisfy |rho| < 1");
  if (p < 1) throw ValidationError("Toeplitz dimension must be >= 1");
  Eigen::MatrixXd s(p, p);
  for (int j = 0; j < p; ++j) {
    for (int k = 0; k < p; ++k) s(j, k) = std::pow(rho, std::abs(j - k));
  }
  return s;
}

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate_index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(replicate_index + 0x632BE59BD9B4E019ULL));
}

Replicate gen_replicate(const Scenario& sc, int replicate_index) {
  sc.validate();
  std::mt19937_64 rng(replicate_seed(sc.seed, static_cast<std::uint64_t>(replicate_index)));
  std::normal_distribution<double> normal(0.0, 1.0);

  const Eigen::MatrixXd chol = toeplitz_sigma(sc.p, sc.rho_toeplitz).llt().matrixL();
  Eigen::MatrixXd z(sc.n, sc.p);
  for (int i = 0; i < sc.n; ++i) {
    for (int j = 0; j < sc.p; ++j) z(i, j) = normal(rng);
  }
  Eigen::MatrixXd x = z * chol.transpose();

  std::vector<Eigen::Index> support;
  if (sc.fixed_support) {
    std::mt19937_64 srng(replicate_seed(sc.seed, kSupportStream));
    support = draw_support(srng, sc.p, sc.n_signal);
  } else {
    support = draw_support(rng, sc.p, sc.n_signal);
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(sc.p);
  std::uniform_real_distribution<double> signal(sc.signal_low, sc.signal_high);
  for (Eigen::Index j : support) beta[j] = sc.signal_low == sc.signal_high ? sc.signal_low : signal(rng);

  Eigen::VectorXd noise(sc.n);
  for (int i = 0; i < sc.n; ++i) noise[i] = normal(rng);
  Eigen::VectorXd y = x * beta + sc.sigma * noise;

  return Replicate{Dataset(std::move(x), std::move(y)), TruthSpec(std::move(beta))};
}

ScenarioReport run_scenario(const Scenario& sc, const std::vector<Method>& methods,
                            const PathSpec& grid, const AdmmConfig& acfg, int threads) {
  sc.validate();
  grid.validate();
  acfg.validate();
  if (methods.empty()) throw ValidationError("run_scenario needs at least one method");
  const auto start = std::chrono::steady_clock::now();

  const auto reps = static_cast<std::size_t>(sc.n_replicates);
  // results[r][m]
  std::vector<std::vector<ReplicateMetrics>> results(reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t r = next++; r < reps; r = next++) {
      auto& row = results[r];
      const int index = static_cast<int>(r);
      try {
        const Replicate rep = gen_replicate(sc, index);
        const StandardizedDesign design = standardize(rep.data);
        for (const Method& method : methods) {
          row.push_back(evaluate_method(rep, design, method, grid, acfg, index));
        }
      } catch (const Error& e) {
        row.clear();
        for (std::size_t m = 0; m < methods.size(); ++m) {
          ReplicateMetrics failed;
          failed.replicate = index;
          failed.failed = true;
          failed.error = e.what();
          row.push_back(std::move(failed));
        }
      }
    }
  };
  const int workers = std::clamp(threads, 1, static_cast<int>(reps));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  ScenarioReport report;
  report.scenario = sc;
  report.grid = grid;
  report.rescaled_lambda = lambda_grid(1.0, grid);
  const auto n_grid = static_cast<std::size_t>(grid.n_lambda);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    MethodReport mr;
    mr.method = methods[m];
    mr.mean_mse.assign(n_grid, 0.0);
    mr.mean_fpr.assign(n_grid, 0.0);
    mr.mean_tpr.assign(n_grid, 0.0);
    int ok = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      ReplicateMetrics& rm = results[r][m];
      if (rm.failed) {
        ++mr.failures;
      } else {
        ++ok;
        for (std::size_t k = 0; k < n_grid; ++k) {
          mr.mean_mse[k] += rm.mse[k];
          mr.mean_fpr[k] += rm.fpr[k];
          mr.mean_tpr[k] += rm.tpr[k];
        }
        mr.mean_auc += rm.auc;
        mr.nonconverged_fits += rm.nonconverged_fits;
      }
      mr.replicates.push_back(std::move(rm));
    }
    if (ok > 0) {
      for (std::size_t k = 0; k < n_grid; ++k) {
        mr.mean_mse[k] /= ok;
        mr.mean_fpr[k] /= ok;
        mr.mean_tpr[k] /= ok;
      }
      mr.mean_auc /= ok;
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      std::fill(mr.mean_mse.begin(), mr.mean_mse.end(), nan);
      std::fill(mr.mean_fpr.begin(), mr.mean_fpr.end(), nan);
      std::fill(mr.mean_tpr.begin(), mr.mean_tpr.end(), nan);
      mr.mean_auc = nan;
    }
    report.methods.push_back(std::move(mr));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

using nlohmann::json;

template <typename T>
T field(const json& doc, const char* key, T fallback, bool required = false) {
  if (!doc.contains(key)) {
    if (required) throw ValidationError(std::string("scenario field '") + key + "' is required");
    return fallback;
  }
  const json& v = doc.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ValidationError(std::string("scenario field '") + key + "': expected boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ValidationError(std::string("scenario field '") + key + "': expected integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ValidationError(std::string("scenario field '") + key + "': expected number");
  } else {
    if (!v.is_string()) throw ValidationError(std::string("scenario field '") + key + "': expected string");
  }
  return v.get<T>();
}

}  // namespace

ScenarioFile parse_scenario_file(const json& doc) {
  if (!doc.is_object()) throw ValidationError("scenario file must contain a JSON object");
  static const std::vector<std::string> known{
      "name", "n", "p", "rho_toeplitz", "n_signal", "signal_low", "signal_high", "sigma",
      "n_replicates", "seed", "fixed_support", "methods", "gamma_scad", "gamma_mcp", "n_lambda",
      "lambda_min_ratio"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ValidationError("scenario field '" + key + "' is not recognized");
    }
  }
  ScenarioFile out;
  Scenario base;
  base.name = field<std::string>(doc, "name", base.name);
  base.n = field<int>(doc, "n", base.n);
  base.p = field<int>(doc, "p", base.p);
  base.rho_toeplitz = field<double>(doc, "rho_toeplitz", base.rho_toeplitz);
  base.n_signal = field<int>(doc, "n_signal", base.n_signal);
  base.signal_low = field<double>(doc, "signal_low", base.signal_low);
  base.signal_high = field<double>(doc, "signal_high", base.signal_high);
  base.n_replicates = field<int>(doc, "n_replicates", base.n_replicates);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) {
      throw ValidationError("scenario field 'seed': expected non-negative integer");
    }
    base.seed = doc.at("seed").get<std::uint64_t>();
  }
  base.fixed_support = field<bool>(doc, "fixed_support", base.fixed_support);
  out.gamma_scad = field<double>(doc, "gamma_scad", out.gamma_scad);
  out.gamma_mcp = field<double>(doc, "gamma_mcp", out.gamma_mcp);
  out.grid.n_lambda = field<int>(doc, "n_lambda", out.grid.n_lambda);
  out.grid.lambda_min_ratio = field<double>(doc, "lambda_min_ratio", out.grid.lambda_min_ratio);

  std::vector<double> sigmas{base.sigma};
  if (doc.contains("sigma")) {
    const json& s = doc.at("sigma");
    if (s.is_number()) {
      sigmas = {s.get<double>()};
    } else if (s.is_array() && !s.empty() &&
               std::all_of(s.begin(), s.end(), [](const json& e) { return e.is_number(); })) {
      sigmas = s.get<std::vector<double>>();
    } else {
      throw ValidationError("scenario field 'sigma': expected a number or a nonempty list of numbers");
    }
  }
  for (double sigma : sigmas) {
    Scenario sc = base;
    sc.sigma = sigma;
    try {
      sc.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("scenario: ") + e.what());
    }
    out.scenarios.push_back(sc);
  }
  try {
    out.grid.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }

  if (doc.contains("methods")) {
    const json& ms = doc.at("methods");
    if (!ms.is_array() || ms.empty()) {
      throw ValidationError("scenario field 'methods': expected a nonempty list of strings");
    }
    for (const json& m : ms) {
      if (!m.is_string()) throw ValidationError("scenario field 'methods': expected strings");
      out.methods.push_back(parse_method(m.get<std::string>(), out.gamma_scad, out.gamma_mcp));
    }
  } else {
    out.methods = default_methods(out.gamma_scad, out.gamma_mcp);
  }
  return out;
}

void write_metrics_csv(std::ostream& out, const std::vector<ScenarioReport>& reports) {
  out << "scenario,method,penalty,nu_rule,gamma,sigma,replicate,lambda_index,rescaled_lambda,"
         "lambda,mse,fpr,tpr,nonzeros\n";
  for (const ScenarioReport& rep : reports) {
    for (const MethodReport& mr : rep.methods) {
      const std::string prefix =
          csv_field(rep.scenario.name) + ',' + csv_field(mr.method.label) + ',' +
          std::string(to_string(mr.method.kind)) + ',' +
          (mr.method.kind == PenaltyKind::Cdf ? nu_rule_name(mr.method.nu_rule) : "") + ',' +
          (mr.method.gamma ? format_number(*mr.method.gamma) : "") + ',' +
          format_number(rep.scenario.sigma) + ',';
      for (const ReplicateMetrics& rm : mr.replicates) {
        if (rm.failed) continue;
        for (std::size_t k = 0; k < rm.mse.size(); ++k) {
          const double rescaled = rep.rescaled_lambda[static_cast<Eigen::Index>(k)];
          out << prefix << rm.replicate << ',' << k << ',' << format_number(rescaled) << ','
              << format_number(rescaled * rm.lambda_max) << ',' << format_number(rm.mse[k]) << ','
              << format_number(rm.fpr[k]) << ',' << format_number(rm.tpr[k]) << ','
              << rm.nonzeros[k] << '\n';
        }
      }
    }
  }
}

void write_auc_csv(std::ostream& out, const std::vector<ScenarioReport>& reports) {
  out << "scenario,method,penalty,nu_rule,gamma,sigma,replicate,auc,failed,error\n";
  for (const ScenarioReport& rep : reports) {
    for (const MethodReport& mr : rep.methods) {
      for (const ReplicateMetrics& rm : mr.replicates) {
        out << csv_field(rep.scenario.name) << ',' << csv_field(mr.method.label) << ','
            << to_string(mr.method.kind) << ','
            << (mr.method.kind == PenaltyKind::Cdf ? nu_rule_name(mr.method.nu_rule) : "") << ','
            << (mr.method.gamma ? format_number(*mr.method.gamma) : "") << ','
            << format_number(rep.scenario.sigma) << ',' << rm.replicate << ','
            << (rm.failed ? "" : format_number(rm.auc)) << ',' << (rm.failed ? 1 : 0) << ','
            << csv_field(rm.error) << '\n';
      }
    }
  }
}

nlohmann::json summary_json(const std::vector<ScenarioReport>& reports) {
  json doc;
  doc["version"] = std::string(kVersion);
  doc["lambda_rescaling"] = "lambda / lambda_max per replicate (log-spaced grid)";
  doc["scenarios"] = json::array();
  for (const ScenarioReport& rep : reports) {
    const Scenario& sc = rep.scenario;
    json s;
    s["scenario"] = {{"name", sc.name},         {"n", sc.n},
                     {"p", sc.p},               {"rho_toeplitz", sc.rho_toeplitz},
                     {"n_signal", sc.n_signal}, {"signal_low", sc.signal_low},
                     {"signal_high", sc.signal_high}, {"sigma", sc.sigma},
                     {"n_replicates", sc.n_replicates}, {"seed", sc.seed},
                     {"fixed_support", sc.fixed_support}};
    s["n_lambda"] = rep.grid.n_lambda;
    s["lambda_min_ratio"] = rep.grid.lambda_min_ratio;
    s["rescaled_lambda"] = std::vector<double>(rep.rescaled_lambda.begin(), rep.rescaled_lambda.end());
    s["wall_seconds"] = rep.wall_seconds;
    s["methods"] = json::array();
    for (const MethodReport& mr : rep.methods) {
      json m;
      m["label"] = mr.method.label;
      m["penalty"] = std::string(to_string(mr.method.kind));
      if (mr.method.kind == PenaltyKind::Cdf) m["nu_rule"] = nu_rule_name(mr.method.nu_rule);
      if (mr.method.gamma) m["gamma"] = *mr.method.gamma;
      m["mean_auc"] = mr.mean_auc;
      m["failures"] = mr.failures;
      m["nonconverged_fits"] = mr.nonconverged_fits;
      m["mean_mse"] = mr.mean_mse;
      m["mean_fpr"] = mr.mean_fpr;
      m["mean_tpr"] = mr.mean_tpr;
      if (!mr.mean_mse.empty()) {
        m["min_mean_mse"] = *std::min_element(mr.mean_mse.begin(), mr.mean_mse.end());
      }
      s["methods"].push_back(std::move(m));
    }
    doc["scenarios"].push_back(std::move(s));
  }
  return doc;
}

}  // namespace cdfpen
