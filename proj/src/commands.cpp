#include "dpsqkd/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dpsqkd/bounds.hpp"
#include "dpsqkd/errors.hpp"
#include "dpsqkd/keyrate.hpp"

namespace dpsqkd {

LambdaGrid LambdaGrid::parse(const std::string& text) {
  LambdaGrid g;
  std::istringstream is(text);
  std::string a, b, c;
  if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c) || a.empty() || b.empty() || c.empty())
    throw InvalidInput("lambda grid must look like lo:hi:n, got '" + text + "'");
  try {
    std::size_t pa, pb, pc;
    g.lo = std::stod(a, &pa);
    g.hi = std::stod(b, &pb);
    g.n = std::stoi(c, &pc);
    if (pa != a.size() || pb != b.size() || pc != c.size()) throw InvalidInput("trailing characters");
  } catch (const std::exception&) {
    throw InvalidInput("lambda grid must look like lo:hi:n, got '" + text + "'");
  }
  if (!(g.lo > 0.0) || !(g.hi >= g.lo) || !std::isfinite(g.hi) || g.n < 1 || (g.n > 1 && g.hi == g.lo))
    throw InvalidInput("lambda grid needs 0 < lo < hi and n >= 1");
  return g;
}

std::vector<double> LambdaGrid::values() const {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int k = 0; k < n; ++k) v[k] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

std::string LambdaGrid::str() const { return format_double(lo) + ":" + format_double(hi) + ":" + std::to_string(n); }

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::Bound: return "bound";
    case Command::Curve: return "curve";
    case Command::Keyrate: return "keyrate";
    default: return "verify";
  }
}

const char* model_choice_name(ModelChoice m) {
  switch (m) {
    case ModelChoice::Comp: return "comp";
    case ModelChoice::Sp: return "sp";
    default: return "both";
  }
}

std::vector<PhaseErrorModel> models_of(ModelChoice m) {
  switch (m) {
    case ModelChoice::Comp: return {PhaseErrorModel::Complementarity};
    case ModelChoice::Sp: return {PhaseErrorModel::ShorPreskill};
    default: return {PhaseErrorModel::Complementarity, PhaseErrorModel::ShorPreskill};
  }
}

std::vector<double> distances(const RunConfig& c) {
  std::vector<double> d;
  int n = static_cast<int>(std::floor((c.dist_end - c.dist_start) / c.dist_step + 1e-9)) + 1;
  for (int k = 0; k < n; ++k) d.push_back(c.dist_start + k * c.dist_step);
  return d;
}

VerifyConfig verify_config(const RunConfig& c) {
  VerifyConfig v;
  v.L_max = c.L_max;
  if (c.lambda_grid) v.lambdas = c.lambda_grid->values();
  v.pi_perturbation = c.canary;
  return v;
}

}  // namespace

void RunConfig::validate() const {
  if (L < 3) throw InvalidInput("--L must be at least 3");
  if (!(e_b >= 0.0 && e_b <= 0.5)) throw InvalidInput("--eb must lie in [0, 0.5]");
  if (nu && (*nu < 0 || *nu > 2)) throw InvalidInput("--nu must be 0, 1 or 2");
  if (command == Command::Keyrate) {
    if (!(dist_start >= 0.0) || !(dist_end >= dist_start) || !(dist_step > 0.0))
      throw InvalidInput("distance range needs 0 <= start <= end and step > 0");
  }
  if (eb_points < 2) throw InvalidInput("--eb-points must be at least 2");
  if (table_points < 2) throw InvalidInput("--table-points must be at least 2");
  if (L_max < 3) throw InvalidInput("--L-max must be at least 3");
  if (!std::isfinite(canary)) throw InvalidInput("canary perturbation must be finite");
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command_name(command);
  j["L"] = L;
  switch (command) {
    case Command::Bound:
      j["nu"] = nu ? nlohmann::ordered_json(*nu) : nlohmann::ordered_json(nullptr);
      j["model"] = model_choice_name(model);
      j["lambda_grid"] = (lambda_grid ? *lambda_grid : LambdaGrid{}).str();
      break;
    case Command::Curve:
      j["nu"] = nu.value_or(1);
      j["model"] = model_choice_name(model);
      j["eb_points"] = eb_points;
      break;
    case Command::Keyrate:
      j["eb"] = e_b;
      j["model"] = model_choice_name(model);
      j["dist_start"] = dist_start;
      j["dist_end"] = dist_end;
      j["dist_step"] = dist_step;
      j["table_points"] = table_points;
      break;
    case Command::Verify: {
      auto v = verify_config(*this);
      j["L_max"] = L_max;
      j["lambdas"] = v.lambdas;
      j["pi_perturbation"] = canary;
      break;
    }
  }
  return j;
}

Table cmd_bound(const RunConfig& c) {
  c.validate();
  BlockConfig cfg(c.L);
  Table t;
  t.columns = {"model", "nu", "lambda", "omega_minus", "omega_plus", "omega", "branch"};
  std::vector<int> nus = c.nu ? std::vector<int>{*c.nu} : std::vector<int>{0, 1, 2};
  auto grid = (c.lambda_grid ? *c.lambda_grid : LambdaGrid{}).values();
  for (auto model : models_of(c.model)) {
    for (int nu : nus) {
      for (double lam : grid) {
        OmegaValue v = omega(cfg, nu, lam, model);
        t.add_row({std::string(model_name(model)), std::int64_t{nu}, lam, v.minus ? Cell{*v.minus} : Cell{}, v.plus,
                   v.value, std::string(branch_name(v.branch))});
      }
    }
  }
  return t;
}

Table cmd_curve(const RunConfig& c) {
  c.validate();
  const int nu = c.nu.value_or(1);
  BlockConfig cfg(c.L);
  auto models = models_of(c.model);
  Table t;
  t.columns = {"e_b"};
  std::vector<BoundaryCurve> curves;
  for (auto m : models) {
    t.columns.push_back(std::string("e_ph_") + model_name(m));
    curves.push_back(phase_error_curve(cfg, nu, m, c.eb_points));
    if (nu == 1) {
      // One-photon curves carry no L dependence; a second block length must
      // reproduce them exactly.
      auto other = phase_error_curve(BlockConfig(c.L + 1), nu, m, c.eb_points);
      for (std::size_t k = 0; k < other.points.size(); ++k) {
        if (std::abs(other.points[k].bound - curves.back().points[k].bound) > 1e-12)
          throw ComputationError("one-photon curve depends on L at e_b=" + format_double(other.points[k].e_b));
      }
    }
  }
  for (int k = 0; k < c.eb_points; ++k) {
    std::vector<Cell> row{curves.front().points[k].e_b};
    for (auto& cv : curves) row.push_back(cv.points[k].bound);
    t.add_row(std::move(row));
  }
  return t;
}

Table cmd_keyrate(const RunConfig& c) {
  c.validate();
  BlockConfig cfg(c.L);
  auto models = models_of(c.model);
  KeyRateOptions opts;
  opts.boundary.table_points = c.table_points;
  auto ds = distances(c);

  std::vector<std::vector<KeyRateResult>> sweeps;
  Table t;
  t.columns = {"distance_km", "eta"};
  for (auto m : models) {
    std::string n = model_name(m);
    for (const char* col : {"G_", "alpha_sq_opt_", "gamma_opt_", "no_key_"}) t.columns.push_back(col + n);
    sweeps.push_back(KeyRateModel(cfg, m, opts).distance_sweep(c.e_b, ds));
  }
  if (models.size() == 2) t.columns.push_back("ratio");

  for (std::size_t k = 0; k < ds.size(); ++k) {
    std::vector<Cell> row{ds[k], eta_from_distance(ds[k])};
    for (auto& s : sweeps) {
      row.push_back(s[k].G);
      row.push_back(s[k].alpha_sq_opt);
      row.push_back(s[k].gamma_opt);
      row.push_back(s[k].no_key);
    }
    if (sweeps.size() == 2) row.push_back(sweeps[1][k].G > 0.0 ? Cell{sweeps[0][k].G / sweeps[1][k].G} : Cell{});
    t.add_row(std::move(row));
  }
  return t;
}

VerifyOutcome cmd_verify(const RunConfig& c) {
  c.validate();
  VerifyOutcome o{{}, run_verification(verify_config(c))};
  o.table.columns = {"suite", "check", "L", "lambda", "residual", "tolerance", "passed"};
  for (const auto& k : o.report.checks)
    o.table.add_row({k.suite, k.name, k.L ? Cell{std::int64_t{k.L}} : Cell{}, k.lambda != 0.0 ? Cell{k.lambda} : Cell{},
                     k.residual, k.tolerance, k.passed});
  return o;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Table t;
  int code = kExitOk;
  try {
    c.validate();
    switch (c.command) {
      case Command::Bound: t = cmd_bound(c); break;
      case Command::Curve: t = cmd_curve(c); break;
      case Command::Keyrate: t = cmd_keyrate(c); break;
      case Command::Verify: {
        auto o = cmd_verify(c);
        t = std::move(o.table);
        if (!o.report.passed()) {
          code = kExitFailure;
          err << "verification failed: " << o.report.failures() << " of " << o.report.checks.size() << " checks\n";
          std::size_t shown = 0;
          for (const auto& k : o.report.checks) {
            if (k.passed) continue;
            if (shown++ == 10) {
              err << "  ...\n";
              break;
            }
            err << "  " << k.suite << ": " << k.name << " (L=" << k.L << ", lambda=" << format_double(k.lambda)
                << ", residual=" << format_double(k.residual) << ")\n";
          }
        }
        break;
      }
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << c.out << " for writing\n";
      return kExitUsage;
    }
  }
  std::ostream& os = c.out.empty() ? out : file;
  if (c.format == Format::Csv) write_csv(os, t);
  else write_json(os, t, c.to_json());
  return code;
}

}  // namespace dpsqkd
