#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "typeb/clt.hpp"
#include "typeb/coxeter.hpp"
#include "typeb/errors.hpp"
#include "typeb/fock.hpp"
#include "typeb/spins.hpp"
#include "typeb/wick.hpp"

#ifndef TYPEB_VERSION_STRING
#define TYPEB_VERSION_STRING "0.0.0"
#endif

namespace typeb::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json manifest(const std::string& subcommand, json parameters, json seeds,
              Clock::time_point start) {
  json m;
  m["tool"] = "typeb";
  m["version"] = TYPEB_VERSION_STRING;
  m["subcommand"] = subcommand;
  m["parameters"] = std::move(parameters);
  m["seeds"] = std::move(seeds);
  m["wall_time_s"] = seconds_since(start);
  return m;
}

int thread_count() {
  if (const char* env = std::getenv("TYPEB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 256) return static_cast<int>(v);
    throw InputError("TYPEB_THREADS must be an integer in 1..256");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Eigen::MatrixXd parse_pi0(const std::string& name, int d) {
  Eigen::MatrixXd pi0 = Eigen::MatrixXd::Identity(d, d);
  if (name == "I" || name == "identity") return pi0;
  if (name == "neg") return -pi0;
  if (name == "diag") {
    for (int i = 1; i < d; i += 2) pi0(i, i) = -1.0;
    return pi0;
  }
  if (name == "swap") {
    if (d < 2) throw InputError("--pi0 swap needs d >= 2");
    pi0(0, 0) = pi0(1, 1) = 0.0;
    pi0(0, 1) = pi0(1, 0) = 1.0;
    return pi0;
  }
  throw InputError("unknown --pi0 '" + name + "' (expected I, neg, diag or swap)");
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw InputError("unsupported --format '" + format + "'");
}

// ---------------------------------------------------------------------------
// moments

struct MomentsArgs {
  std::string family;
  int order = 0;
  double q = 0.0;
  double rho = 0.0;
  double t = 1.0;
  bool symbolic = false;
  std::string format = "csv";
  CLI::Option* rho_opt = nullptr;
  CLI::Option* t_opt = nullptr;
};

int cmd_moments(const MomentsArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  require_format(a.format, {"csv", "json"});
  if (a.family != "typeB" && a.family != "q" && a.family != "qt") {
    throw InputError("--family must be typeB, q or qt");
  }
  if (a.rho_opt->count() > 0 && a.family != "typeB") {
    throw InputError("--rho only applies to --family typeB");
  }
  if (a.t_opt->count() > 0 && a.family != "qt") throw InputError("--t only applies to --family qt");
  if (!(std::abs(a.q) <= 1.0)) throw InputError("--q must lie in [-1, 1]");
  if (!(std::abs(a.rho) < 1.0)) throw InputError("--rho must lie in (-1, 1)");
  if (!(std::abs(a.t) <= 1.0)) throw InputError("--t must lie in [-1, 1]");

  BivariatePoly poly;
  if (a.family == "typeB") {
    poly = typeB_moment_scalar(a.order);
  } else if (a.family == "q") {
    poly = q_moment(a.order);
  } else {
    poly = qt_moment(a.order);
  }
  const double second = a.family == "typeB" ? a.rho : a.t;
  const double value = poly.evaluate(a.q, second);

  json params;
  params["family"] = a.family;
  params["order"] = a.order;
  params["symbolic"] = a.symbolic;
  if (!a.symbolic) {
    params["q"] = a.q;
    if (a.family == "typeB") params["rho"] = a.rho;
    if (a.family == "qt") params["t"] = a.t;
  }
  const json m = manifest("moments", params, json::array(), start);

  if (a.format == "json") {
    json doc;
    doc["manifest"] = m;
    doc["family"] = a.family;
    doc["order"] = a.order;
    if (a.symbolic) {
      doc["labels"] = {poly.first_label(), poly.second_label()};
      json terms = json::array();
      for (const auto& [e, c] : poly.terms()) {
        json term;
        term["e1"] = e.first;
        if (poly.univariate()) {
          term["e2"] = nullptr;
        } else {
          term["e2"] = e.second;
        }
        term["coeff"] = c;
        terms.push_back(term);
      }
      doc["terms"] = terms;
    } else {
      doc["value"] = value;
    }
    out << doc.dump(2) << '\n';
    return kOk;
  }

  out << "# manifest: " << m.dump() << '\n';
  if (a.symbolic) {
    out << "# labels: " << poly.first_label() << ','
        << (poly.univariate() ? std::string() : poly.second_label()) << '\n';
    out << "e1,e2,coeff\n";
    for (const auto& [e, c] : poly.terms()) {
      out << e.first << ',' << (poly.univariate() ? std::string() : std::to_string(e.second))
          << ',' << c << '\n';
    }
  } else {
    out << "family,order,q,rho,t,value\n";
    out << a.family << ',' << a.order << ',' << fmt(a.q) << ','
        << (a.family == "typeB" ? fmt(a.rho) : std::string()) << ','
        << (a.family == "qt" ? fmt(a.t) : std::string()) << ',' << fmt(value) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// clt

struct CltArgs {
  int k = 4;
  double q = 0.0;
  double rho = 0.0;
  std::vector<int> Ns;
  int seeds = 1;
  std::uint64_t seed_base = 1;
  bool exact_expectation = false;
  std::string method = "auto";
  std::string format = "csv";
};

int cmd_clt(const CltArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  require_format(a.format, {"csv", "json"});
  if (a.Ns.empty()) throw InputError("--Ns must list at least one N");
  if (a.seeds < 1) throw InputError("--seeds must be at least 1");
  const Method method = parse_method(a.method);

  std::vector<std::uint64_t> seeds;
  for (int s = 0; s < a.seeds; ++s) seeds.push_back(a.seed_base + static_cast<std::uint64_t>(s));

  ConvergenceOptions options;
  options.method = method;
  options.exact_expectation = a.exact_expectation;
  options.threads = thread_count();
  const auto rows = convergence_report(a.k, a.q, a.rho, a.Ns, seeds, options);

  json params;
  params["k"] = a.k;
  params["q"] = a.q;
  params["rho"] = a.rho;
  params["Ns"] = a.Ns;
  params["seeds"] = a.seeds;
  params["seed_base"] = a.seed_base;
  params["exact_expectation"] = a.exact_expectation;
  params["method"] = to_string(method);
  const json m = manifest("clt", params, seeds, start);

  if (a.format == "json") {
    json doc;
    doc["manifest"] = m;
    json jrows = json::array();
    for (const auto& r : rows) {
      json row;
      row["seed"] = r.seed;
      row["N"] = r.N;
      row["moment"] = r.moment ? json(*r.moment) : json(nullptr);
      row["limit"] = r.limit;
      row["abs_error"] = r.abs_error ? json(*r.abs_error) : json(nullptr);
      row["expected_moment"] = r.expected ? json(*r.expected) : json(nullptr);
      row["skipped"] = r.skipped.empty() ? json(nullptr) : json(r.skipped);
      jrows.push_back(row);
    }
    doc["rows"] = jrows;
    out << doc.dump(2) << '\n';
    return kOk;
  }

  out << "# manifest: " << m.dump() << '\n';
  out << "seed,N,moment,limit,abs_error,expected_moment\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << r.N << ',';
    out << (r.skipped.empty() ? fmt(*r.moment) : "SKIPPED(" + r.skipped + ")") << ',';
    out << fmt(r.limit) << ',';
    out << (r.abs_error ? fmt(*r.abs_error) : std::string()) << ',';
    out << (r.expected ? fmt(*r.expected) : std::string()) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// check

struct CheckRow {
  std::string name;
  bool pass = true;
  std::string value;
  json detail;
};

struct CheckArgs {
  std::string format = "text";
  // psd
  int n = 2;
  int d = 2;
  double alpha = 0.0;
  double q = 0.0;
  std::string pi0 = "diag";
  bool strict = false;
  // fock
  int M = 4;
  int trials = 20;
  double tol = 1e-10;
  // hypotheses
  double rho = 0.0;
  std::uint64_t seed = 1;
  int nmax = 3;
  std::string r_convention = "symmetric";
};

int emit_check(const std::string& which, const json& params, std::vector<std::uint64_t> seeds,
               const std::vector<CheckRow>& rows, const std::string& format,
               Clock::time_point start, std::ostream& out) {
  bool all = true;
  json results = json::array();
  for (const auto& r : rows) {
    all = all && r.pass;
    json jr;
    jr["name"] = r.name;
    jr["pass"] = r.pass;
    jr["value"] = r.value;
    jr["detail"] = r.detail;
    results.push_back(jr);
  }
  json doc;
  doc["manifest"] = manifest("check " + which, params, seeds, start);
  doc["check"] = which;
  doc["pass"] = all;
  doc["results"] = results;

  if (format == "json") {
    out << doc.dump(2) << '\n';
  } else {
    std::size_t width = 5;
    for (const auto& r : rows) width = std::max(width, r.name.size());
    out << "check " << which << '\n';
    for (const auto& r : rows) {
      out << "  " << r.name << std::string(width - r.name.size() + 2, ' ')
          << (r.pass ? "PASS" : "FAIL") << "  " << r.value << '\n';
    }
    out << (all ? "PASS" : "FAIL") << '\n';
    out << "detail: " << doc.dump() << '\n';
  }
  return all ? kOk : kCheckFailed;
}

int cmd_check_psd(const CheckArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  require_format(a.format, {"text", "json"});
  const Eigen::MatrixXd pi0 = parse_pi0(a.pi0, a.d);
  const Eigen::MatrixXd p = symmetrizer(a.n, a.d, pi0, a.alpha, a.q);
  const PsdResult r = psd_check(p, false);
  std::vector<CheckRow> rows;
  rows.push_back({"psd", r.pass, "min_eigenvalue=" + fmt(r.min_eigenvalue),
                  {{"min_eigenvalue", r.min_eigenvalue}, {"tolerance", kPsdTolerance}}});
  if (a.strict) {
    const PsdResult s = psd_check(p, true);
    rows.push_back({"positive_definite", s.pass, "min_eigenvalue=" + fmt(s.min_eigenvalue),
                    {{"min_eigenvalue", s.min_eigenvalue}, {"threshold", kStrictTolerance}}});
  }
  json params = {{"n", a.n}, {"d", a.d},     {"alpha", a.alpha},
                 {"q", a.q}, {"pi0", a.pi0}, {"strict", a.strict}};
  return emit_check("psd", params, {}, rows, a.format, start, out);
}

int cmd_check_fock(const CheckArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  require_format(a.format, {"text", "json"});
  if (a.trials < 1) throw InputError("--trials must be at least 1");
  FockSpaceConfig cfg;
  cfg.d = a.d;
  cfg.max_level = a.M;
  cfg.alpha = a.alpha;
  cfg.q = a.q;
  cfg.pi0 = parse_pi0(a.pi0, a.d);
  const FockSpace fs(cfg);

  std::vector<CheckRow> rows;
  double min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < fs.ladder().min_eigenvalue.size(); ++n) {
    min_eig = std::min(min_eig, fs.ladder().min_eigenvalue[n]);
  }
  rows.push_back({"gram_ladder", min_eig > 0.0, "min_eigenvalue=" + fmt(min_eig),
                  {{"min_eigenvalue", min_eig}, {"warnings", fs.ladder().warnings}}});

  std::mt19937_64 rng(a.seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Eigen::VectorXd x(a.d);
    for (int i = 0; i < a.d; ++i) x(i) = normal(rng);
    return x;
  };
  auto random_state = [&](int top) {
    FockState s(a.d, a.M);
    for (int n = 0; n <= top; ++n) {
      for (Eigen::Index i = 0; i < s.level(n).size(); ++i) s.level(n)(i) = normal(rng);
    }
    return s;
  };

  double comm = 0.0;
  double adj = 0.0;
  for (int t = 0; t < a.trials; ++t) {
    const Eigen::VectorXd x = random_vector();
    const Eigen::VectorXd y = random_vector();
    comm = std::max(comm, fs.commutation_residual(x, y));
    const FockState u = random_state(a.M - 1);
    const FockState v = random_state(a.M);
    adj = std::max(adj, std::abs(fs.inner(fs.creation(x, u), v) - fs.inner(u, fs.annihilation(x, v))));
  }
  rows.push_back({"commutation", comm <= a.tol, "max_residual=" + fmt(comm),
                  {{"max_residual", comm}, {"tolerance", a.tol}, {"trials", a.trials}}});
  rows.push_back({"adjoint", adj <= a.tol, "max_residual=" + fmt(adj),
                  {{"max_residual", adj}, {"tolerance", a.tol}, {"trials", a.trials}}});

  json params = {{"d", a.d},   {"M", a.M},          {"alpha", a.alpha}, {"q", a.q},
                 {"pi0", a.pi0}, {"trials", a.trials}, {"tol", a.tol}};
  return emit_check("fock", params, {a.seed}, rows, a.format, start, out);
}

int cmd_check_hypotheses(const CheckArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  require_format(a.format, {"text", "json"});
  RConvention conv = RConvention::symmetric;
  if (a.r_convention == "ordered") {
    conv = RConvention::ordered;
  } else if (a.r_convention != "symmetric") {
    throw InputError("--r-convention must be symmetric or ordered");
  }
  const SignTable signs(a.seed, a.q, conv);
  const HypothesisReport report = check_hypotheses(signs, a.rho, a.nmax);
  std::vector<CheckRow> rows;
  for (const auto& r : report.results) {
    json detail = {{"witness", r.witness}, {"detail", r.detail}};
    rows.push_back({r.name, r.pass, r.pass ? std::string() : r.witness + ": " + r.detail, detail});
  }
  json params = {{"rho", a.rho}, {"q", a.q}, {"nmax", a.nmax}, {"r_convention", a.r_convention}};
  return emit_check("hypotheses", params, {a.seed}, rows, a.format, start, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Type-B Gaussian moments, deformed Fock spaces and mixed-spin CLT experiments",
               "typeb"};
  app.set_version_flag("--version", TYPEB_VERSION_STRING);
  app.require_subcommand(1);

  MomentsArgs ma;
  auto* moments = app.add_subcommand("moments", "Exact limit moment polynomials and values");
  moments->add_option("--family", ma.family, "typeB, q or qt")->required();
  moments->add_option("--order", ma.order, "Moment order")->required()->check(CLI::NonNegativeNumber);
  moments->add_option("--q", ma.q, "Value of q");
  ma.rho_opt = moments->add_option("--rho", ma.rho, "Value of rho (typeB)");
  ma.t_opt = moments->add_option("--t", ma.t, "Value of t (qt)");
  ma.rho_opt->excludes(ma.t_opt);
  moments->add_flag("--symbolic", ma.symbolic, "Print exact monomial rows");
  moments->add_option("--format", ma.format, "csv or json");

  CltArgs ca;
  auto* clt = app.add_subcommand("clt", "Finite-N moments of S_N against the limit");
  clt->add_option("--k", ca.k, "Moment order")->required()->check(CLI::NonNegativeNumber);
  clt->add_option("--q", ca.q, "Sign mean q")->required();
  clt->add_option("--rho", ca.rho, "Covariance rho")->required();
  clt->add_option("--Ns", ca.Ns, "Comma-separated site counts")->required()->delimiter(',');
  clt->add_option("--seeds", ca.seeds, "Number of seeds");
  clt->add_option("--seed-base", ca.seed_base, "First seed");
  clt->add_flag("--exact-expectation", ca.exact_expectation, "Add the exact expectation column");
  clt->add_option("--method", ca.method, "auto, full or class");
  clt->add_option("--format", ca.format, "csv or json");

  CheckArgs ka;
  auto* check = app.add_subcommand("check", "Numerical verification reports");
  check->require_subcommand(1);
  auto* psd = check->add_subcommand("psd", "Positivity of the symmetrizer");
  psd->add_option("--n", ka.n, "Tensor degree")->check(CLI::PositiveNumber);
  psd->add_option("--d", ka.d, "Base dimension")->check(CLI::PositiveNumber);
  psd->add_option("--alpha", ka.alpha, "alpha in [-1, 1]");
  psd->add_option("--q", ka.q, "q in [-1, 1]");
  psd->add_option("--pi0", ka.pi0, "I, neg, diag or swap");
  psd->add_flag("--strict", ka.strict, "Also require positive definiteness");
  psd->add_option("--format", ka.format, "text or json");

  auto* fock = check->add_subcommand("fock", "Commutation relation and adjointness");
  fock->add_option("--d", ka.d, "Base dimension")->check(CLI::PositiveNumber);
  fock->add_option("--M", ka.M, "Truncation level")->check(CLI::PositiveNumber);
  fock->add_option("--alpha", ka.alpha, "alpha in (-1, 1)");
  fock->add_option("--q", ka.q, "q in (-1, 1)");
  fock->add_option("--pi0", ka.pi0, "I, neg, diag or swap");
  fock->add_option("--trials", ka.trials, "Random (x, y) pairs");
  fock->add_option("--seed", ka.seed, "Seed for the random vectors");
  fock->add_option("--tol", ka.tol, "Residual tolerance");
  fock->add_option("--format", ka.format, "text or json");

  auto* hyp = check->add_subcommand("hypotheses", "H1-H5 for the tensor-slot model");
  hyp->add_option("--rho", ka.rho, "rho in (-1, 1)");
  hyp->add_option("--q", ka.q, "Sign mean q");
  hyp->add_option("--seed", ka.seed, "Sign table seed");
  hyp->add_option("--nmax", ka.nmax, "Largest site index (<= 4)");
  hyp->add_option("--r-convention", ka.r_convention, "symmetric or ordered");
  hyp->add_option("--format", ka.format, "text or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadFlags;
  }

  try {
    if (*moments) return cmd_moments(ma, out);
    if (*clt) return cmd_clt(ca, out);
    if (*psd) return cmd_check_psd(ka, out);
    if (*fock) return cmd_check_fock(ka, out);
    if (*hyp) return cmd_check_hypotheses(ka, out);
  } catch (const CapacityError& e) {
    err << "capacity refused (" << e.limit() << "): " << e.what() << '\n';
    return kCapacity;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kBadFlags;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kBadFlags;
}

}  // namespace typeb::cli
