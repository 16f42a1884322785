#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cartan/cartan_realization.hpp"
#include "cartan/io.hpp"
#include "cartan/regularity.hpp"
#include "cartan/root_system.hpp"
#include "cartan/spherical.hpp"
#include "cartan/stationary_phase.hpp"

using namespace cartan;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerdict = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string group;
  std::string roots_file;
  std::vector<double> lambda;
  std::vector<double> a;
  std::string x;  // p element as JSON
  std::optional<double> t;
  double t_min = 16.0;
  double t_max = 256.0;
  int t_count = 5;
  std::string t_spacing = "dyadic";
  std::string method = "auto";
  int resolution = 0;
  std::uint64_t seed = 20240607;
  std::size_t budget = 400000000;
  std::size_t samples = 200000;
  std::string out;
  std::string format = "csv";
  std::vector<std::vector<double>> directions;
  // decay
  double slope_tolerance = 0.1;
  // holder
  int order = 0;
  std::vector<double> exponents{0.5};
  double h_min = 1e-4;
  double h_max = 1e-1;
  int h_count = 13;
  std::vector<std::string> expect;
};

Eigen::VectorXd to_vector(const std::vector<double>& v)
{
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd coords(const CartanData& cd, const std::vector<double>& v, const char* what)
{
  if (v.empty()) throw UsageError(std::string("--") + what + " is required");
  if (static_cast<int>(v.size()) != cd.rank()) {
    throw UsageError(std::string("--") + what + " needs " + std::to_string(cd.rank()) +
                     " coordinates for " + cd.spec().str() + ", got " +
                     std::to_string(v.size()));
  }
  return to_vector(v);
}

CartanData group_of(const RunConfig& cfg)
{
  if (cfg.group.empty()) throw UsageError("--group is required");
  try {
    return realize(GroupSpec::parse(cfg.group));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> t_grid(const RunConfig& cfg)
{
  if (cfg.t) return {*cfg.t};
  if (cfg.t_count < 1) throw UsageError("--t-count must be positive");
  std::vector<double> out;
  if (cfg.t_spacing == "dyadic") {
    if (cfg.t_min <= 0) throw UsageError("dyadic spacing needs --t-min > 0");
    for (double t = cfg.t_min; t <= cfg.t_max * (1 + 1e-12); t *= 2) out.push_back(t);
    return out;
  }
  for (int i = 0; i < cfg.t_count; ++i) {
    const double f = cfg.t_count == 1 ? 0.0 : double(i) / (cfg.t_count - 1);
    if (cfg.t_spacing == "linear") {
      out.push_back(cfg.t_min + f * (cfg.t_max - cfg.t_min));
    } else if (cfg.t_spacing == "log") {
      if (cfg.t_min <= 0) throw UsageError("log spacing needs --t-min > 0");
      out.push_back(cfg.t_min * std::pow(cfg.t_max / cfg.t_min, f));
    } else {
      throw UsageError("unknown --t-spacing " + cfg.t_spacing);
    }
  }
  return out;
}

IntegrateOptions integrate_options(const RunConfig& cfg)
{
  IntegrateOptions o;
  if (cfg.method == "quad") {
    o.method = Method::Quadrature;
  } else if (cfg.method == "mc") {
    o.method = Method::MonteCarlo;
  } else if (cfg.method != "auto") {
    throw UsageError("unknown --method " + cfg.method);
  }
  o.resolution = cfg.resolution;
  o.seed = cfg.seed;
  o.budget = cfg.budget;
  o.samples = cfg.samples;
  return o;
}

std::vector<Eigen::VectorXd> directions(const CartanData& cd, const RunConfig& cfg)
{
  std::vector<Eigen::VectorXd> out;
  for (const auto& d : cfg.directions) out.push_back(coords(cd, d, "direction"));
  return out;
}

// Writes to --out when given, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string& path)
  {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw UsageError("cannot write " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

void emit(const RunConfig& cfg, const Table& table, const json& extra = nullptr)
{
  Sink sink(cfg.out);
  if (cfg.format == "json") {
    json doc = extra.is_null() ? json::object() : extra;
    doc["rows"] = table.to_json();
    sink.stream() << doc.dump(2) << '\n';
  } else {
    table.write_csv(sink.stream());
  }
}

std::string rational_str(const Rational& r)
{
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// -------------------------------------------------------------------------------------------

int run_roots(const RunConfig& cfg)
{
  std::optional<CartanData> cd;
  std::optional<RootSystem> loaded;
  if (!cfg.roots_file.empty()) {
    std::ifstream in(cfg.roots_file);
    if (!in) throw UsageError("cannot read " + cfg.roots_file);
    loaded = root_system_from_json(json::parse(in));
  } else {
    cd = group_of(cfg);
  }
  const RootSystem& rs = loaded ? *loaded : cd->roots();
  const Rational k = kappa(rs);

  std::optional<Eigen::VectorXd> lambda;
  if (!cfg.lambda.empty()) {
    if (static_cast<int>(cfg.lambda.size()) != rs.rank()) {
      throw UsageError("--lambda needs " + std::to_string(rs.rank()) + " coordinates");
    }
    lambda = to_vector(cfg.lambda);
  }

  Sink sink(cfg.out);
  std::ostream& os = sink.stream();
  if (cfg.format == "json") {
    json doc = root_system_to_json(rs);
    if (cd) doc["group"] = cd->spec().str();
    doc["positive"] = rs.positive();
    doc["weyl_order"] = rs.weyl_group().size();
    doc["kappa"] = rational_str(k);
    if (lambda) {
      json pairs = json::array();
      for (std::size_t p : rs.positive()) {
        pairs.push_back({{"root", p}, {"pairing", rs.inner(rs.root(p).coords, *lambda)}});
      }
      doc["pairings"] = pairs;
      doc["n_lambda"] = n_lambda(rs, *lambda);
    }
    os << doc.dump(2) << '\n';
    return kExitOk;
  }

  os << "group: " << (cd ? cd->spec().str() : cfg.roots_file) << "\nrank: " << rs.rank() << '\n';
  os << "positive roots (coords; multiplicity):\n";
  for (std::size_t p : rs.positive()) {
    const Root& r = rs.root(p);
    os << "  [" << p << "]";
    for (Eigen::Index i = 0; i < r.coords.size(); ++i) os << ' ' << format_double(r.coords[i]);
    os << "; m = " << r.multiplicity;
    if (lambda) os << "; <alpha,lambda> = " << format_double(rs.inner(r.coords, *lambda));
    os << '\n';
  }
  os << "simple roots:";
  for (std::size_t s : rs.simple()) os << " [" << s << "]";
  os << "\n|W| = " << rs.weyl_group().size() << "\nkappa = " << rational_str(k) << '\n';
  if (lambda) os << "n(lambda) = " << n_lambda(rs, *lambda) << '\n';
  return kExitOk;
}

int run_kak(const RunConfig& cfg)
{
  const CartanData cd = group_of(cfg);
  if (cfg.x.empty()) throw UsageError("--x (a p element as JSON) is required");
  MotionElement g = cd.identity();
  try {
    g.x = matrix_from_json(json::parse(cfg.x));
    cd.validate(g);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad --x: ") + e.what());
  }
  const KakResult r = kak_project(cd, g);
  json doc{{"a", vector_to_json(r.a_coords)},
           {"a_element", matrix_to_json(r.a)},
           {"k1", matrix_to_json(r.k1)},
           {"regular", is_regular(cd, g)}};
  Sink sink(cfg.out);
  if (cfg.format == "json") {
    sink.stream() << doc.dump(2) << '\n';
  } else {
    Table t({"field", "value"});
    t.add_row({std::string("a"), vector_to_json(r.a_coords).dump()});
    t.add_row({std::string("k1"), matrix_to_json(r.k1).dump()});
    t.add_row({std::string("regular"), std::string(doc["regular"].get<bool>() ? "true" : "false")});
    t.write_csv(sink.stream());
  }
  return kExitOk;
}

int run_spherical(const RunConfig& cfg)
{
  const CartanData cd = group_of(cfg);
  const Eigen::VectorXd lambda = coords(cd, cfg.lambda, "lambda");
  const Eigen::VectorXd a = coords(cd, cfg.a, "a");
  const auto dirs = directions(cd, cfg);
  const IntegrateOptions opts = integrate_options(cfg);
  Table table({"t", "re", "im", "err", "evaluations", "flagged"});
  for (double t : t_grid(cfg)) {
    const SphericalQuery q{lambda, t, a, dirs, opts};
    const IntegralResult r = dirs.empty() ? spherical_value(cd, q) : spherical_derivative(cd, q);
    table.add_row({t, r.value.real(), r.value.imag(), r.error,
                   static_cast<long long>(r.evaluations), static_cast<long long>(r.flagged)});
  }
  emit(cfg, table);
  return kExitOk;
}

int run_asymptotics(const RunConfig& cfg)
{
  const CartanData cd = group_of(cfg);
  const Eigen::VectorXd lambda = coords(cd, cfg.lambda, "lambda");
  const Eigen::VectorXd a = coords(cd, cfg.a, "a");
  const DecayScan scan =
      error_decay_scan(cd, lambda, a, t_grid(cfg), directions(cd, cfg), integrate_options(cfg));
  Table table({"t", "exact_re", "exact_im", "exact_err", "leading_re", "leading_im",
               "scaled_residual", "scaled_residual_err"});
  for (const auto& r : scan.rows) {
    table.add_row({r.t, r.exact.real(), r.exact.imag(), r.exact_error, r.leading.real(),
                   r.leading.imag(), r.scaled_residual, r.scaled_error});
  }
  emit(cfg, table,
       json{{"exponent", scan.exponent},
            {"ratio", scan.ratio},
            {"within_error", scan.within_error},
            {"bounded", scan.bounded}});
  if (cfg.format == "csv") {
    std::cerr << "upper-half max/min " << format_double(scan.ratio)
              << (scan.bounded ? " bounded" : " NOT bounded") << '\n';
  }
  return scan.bounded ? kExitOk : kExitVerdict;
}

int run_decay(const RunConfig& cfg)
{
  const CartanData cd = group_of(cfg);
  const Eigen::VectorXd lambda = coords(cd, cfg.lambda, "lambda");
  const Eigen::VectorXd a = coords(cd, cfg.a, "a");
  DecayFitOptions opts;
  opts.integrate = integrate_options(cfg);
  const DecayFit fit = decay_fit(cd, lambda, a, t_grid(cfg), opts);
  const double target = -n_lambda(cd.roots(), lambda) / 2.0;
  const bool ok = std::abs(fit.slope - target) <= cfg.slope_tolerance && !fit.flagged;

  Table table({"t_start", "t_at_max", "max_abs", "err"});
  for (const auto& w : fit.windows) table.add_row({w.t_start, w.t_at_max, w.max_abs, w.error});
  emit(cfg, table,
       json{{"slope", fit.slope},
            {"half_width", fit.half_width},
            {"intercept", fit.intercept},
            {"target", target},
            {"tolerance", cfg.slope_tolerance},
            {"flagged", fit.flagged},
            {"pass", ok}});
  if (cfg.format == "csv") {
    std::cerr << "slope " << format_double(fit.slope) << " +- " << format_double(fit.half_width)
              << ", target " << format_double(target) << (ok ? " PASS" : " FAIL") << '\n';
  }
  return ok ? kExitOk : kExitVerdict;
}

Verdict parse_verdict(const std::string& s)
{
  if (s == "bounded") return Verdict::Bounded;
  if (s == "unbounded") return Verdict::Unbounded;
  if (s == "indeterminate") return Verdict::Indeterminate;
  throw UsageError("unknown verdict " + s);
}

int run_holder(const RunConfig& cfg)
{
  const CartanData cd = group_of(cfg);
  const Eigen::VectorXd lambda = coords(cd, cfg.lambda, "lambda");
  const Eigen::VectorXd x = coords(cd, cfg.a, "a");
  if (!cfg.expect.empty() && cfg.expect.size() != cfg.exponents.size()) {
    throw UsageError("--expect needs one verdict per exponent");
  }
  if (cfg.h_count < 2 || cfg.h_min <= 0 || cfg.h_max <= cfg.h_min) {
    throw UsageError("offsets need 0 < --h-min < --h-max and --h-count >= 2");
  }
  std::vector<double> offsets;
  for (int i = 0; i < cfg.h_count; ++i) {
    offsets.push_back(cfg.h_min * std::pow(cfg.h_max / cfg.h_min, double(i) / (cfg.h_count - 1)));
  }
  HolderScanOptions opts;
  opts.integrate = integrate_options(cfg);
  if (!cfg.directions.empty()) opts.direction = coords(cd, cfg.directions.front(), "direction");
  const HolderTable table = holder_scan(cd, lambda, cfg.order, cfg.exponents, x, offsets,
                                        t_grid(cfg), opts);

  std::vector<std::string> header{"h", "sup_difference", "t_at_sup", "err"};
  for (double e : table.exponents) header.push_back("ratio_" + format_double(e));
  Table out(header);
  for (const auto& row : table.rows) {
    std::vector<Table::Cell> cells{row.h, row.sup_difference, row.t_at_sup, row.error};
    for (double r : row.ratios) cells.emplace_back(r);
    out.add_row(std::move(cells));
  }
  bool ok = !table.flagged;
  json columns = json::array();
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    const HolderColumn& c = table.columns[i];
    columns.push_back({{"exponent", c.exponent},
                       {"verdict", to_string(c.verdict)},
                       {"max_over_min", c.max_over_min},
                       {"growth_per_decade", c.growth_per_decade},
                       {"loglog_slope", c.loglog_slope},
                       {"monotone", c.monotone}});
    if (!cfg.expect.empty()) ok = ok && c.verdict == parse_verdict(cfg.expect[i]);
    if (cfg.format == "csv") {
      std::cerr << "exponent " << format_double(c.exponent) << ": " << to_string(c.verdict)
                << " (max/min " << format_double(c.max_over_min) << ", growth/decade "
                << format_double(c.growth_per_decade) << ")\n";
    }
  }
  emit(cfg, out,
       json{{"order", table.order},
            {"base_point", vector_to_json(table.base_point)},
            {"offset_direction", vector_to_json(table.offset_direction)},
            {"columns", columns},
            {"flagged", table.flagged}});
  return ok ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Harmonic analysis on Cartan motion groups"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--group", cfg.group, "group: sl:n or so:n,1");
    sub->add_option("--out", cfg.out, "output file (stdout when absent)");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto numeric = [&](CLI::App* sub) {
    sub->add_option("--lambda", cfg.lambda, "lambda in orthonormal coordinates of a*")
        ->delimiter(',');
    sub->add_option("--a", cfg.a, "point of a in orthonormal coordinates")->delimiter(',');
    sub->add_option("--t", cfg.t, "single scale t");
    sub->add_option("--t-min", cfg.t_min, "smallest t of the grid");
    sub->add_option("--t-max", cfg.t_max, "largest t of the grid");
    sub->add_option("--t-count", cfg.t_count, "grid size (linear and log spacing)");
    sub->add_option("--t-spacing", cfg.t_spacing, "linear, log or dyadic")
        ->check(CLI::IsMember({"linear", "log", "dyadic"}));
    sub->add_option("--method", cfg.method, "auto, quad or mc")
        ->check(CLI::IsMember({"auto", "quad", "mc"}));
    sub->add_option("--resolution", cfg.resolution, "quadrature resolution (0 = automatic)");
    sub->add_option("--seed", cfg.seed, "Monte Carlo seed");
    sub->add_option("--budget", cfg.budget, "cap on integrand evaluations");
    sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
    sub->add_option("--direction", cfg.directions,
                    "derivative direction in a (repeat for higher order)")
        ->delimiter(',')
        ->allow_extra_args(false);
  };

  auto* roots = app.add_subcommand("roots", "restricted roots, Weyl group order and kappa");
  common(roots);
  roots->add_option("--lambda", cfg.lambda, "print <alpha, lambda> for this lambda")
      ->delimiter(',');
  roots->add_option("--input", cfg.roots_file, "root system JSON document instead of --group");

  auto* kak = app.add_subcommand("kak", "project a p element to the closed chamber");
  common(kak);
  kak->add_option("--x", cfg.x, "p element as JSON (matrix for sl:n, vector for so:n,1)");

  auto* spherical = app.add_subcommand("spherical", "tabulate phi_{t lambda}(a) over a t grid");
  common(spherical);
  numeric(spherical);

  auto* asym = app.add_subcommand("asymptotics", "compare phi with its leading asymptotics");
  common(asym);
  numeric(asym);

  auto* decay = app.add_subcommand("decay", "fit the decay exponent of phi_{t lambda}(a)");
  common(decay);
  numeric(decay);
  decay->add_option("--tolerance", cfg.slope_tolerance, "allowed |slope + n(lambda)/2|");

  auto* holder = app.add_subcommand("holder", "Hoelder seminorm scan around --a");
  common(holder);
  numeric(holder);
  holder->add_option("--order", cfg.order, "derivative order r");
  holder->add_option("--exponents", cfg.exponents, "Hoelder exponents")->delimiter(',');
  holder->add_option("--h-min", cfg.h_min, "smallest offset");
  holder->add_option("--h-max", cfg.h_max, "largest offset");
  holder->add_option("--h-count", cfg.h_count, "number of offsets");
  holder->add_option("--expect", cfg.expect, "expected verdict per exponent")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*roots) return run_roots(cfg);
    if (*kak) return run_kak(cfg);
    if (*spherical) return run_spherical(cfg);
    if (*asym) return run_asymptotics(cfg);
    if (*decay) return run_decay(cfg);
    if (*holder) return run_holder(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
