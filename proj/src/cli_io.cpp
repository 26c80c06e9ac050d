#include "boundkde/cli_io.hpp"

#include "boundkde/error.hpp"
#include "boundkde/sim_lab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace boundkde {

using nlohmann::json;

// ---------------------------------------------------------------------------
// formatting and CSV

std::string
format_double(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string
trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string>
split_fields(const std::string& line)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ','))
    out.push_back(trim(field));
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

bool
parse_number(const std::string& s, double& out)
{
  if (s.empty())
    return false;
  const char* begin = s.data();
  if (*begin == '+')
    ++begin;
  const auto res = std::from_chars(begin, s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

} // namespace

SampleSet
parse_csv(std::istream& in)
{
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool first_row = true;
  std::vector<double> data;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size(); ++c)
      numeric = numeric && parse_number(fields[c], row[c]);
    if (!numeric) {
      if (first_row) {
        first_row = false;
        dim = fields.size();
        continue; // header
      }
      throw Error(ErrorKind::parse_error,
                  "line " + std::to_string(line_no) + ": non-numeric field", line_no, 0);
    }
    first_row = false;
    if (dim == 0)
      dim = row.size();
    if (row.size() != dim)
      throw Error(ErrorKind::parse_error,
                  "line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                    " columns, found " + std::to_string(row.size()),
                  line_no,
                  0);
    for (std::size_t c = 0; c < row.size(); ++c)
      if (!(row[c] >= 0.0 && row[c] <= 1.0))
        throw Error(ErrorKind::out_of_domain,
                    "line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                      ": value " + fields[c] + " outside [0,1]",
                    line_no,
                    c + 1);
    data.insert(data.end(), row.begin(), row.end());
  }
  if (data.empty())
    throw Error(ErrorKind::parse_error, "no data rows", line_no, 0);
  return SampleSet(dim, std::move(data));
}

SampleSet
read_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::file_not_found, "cannot open '" + path + "'");
  return parse_csv(in);
}

// ---------------------------------------------------------------------------
// model file

ProductKernelSpec
ModelFile::spec() const
{
  std::vector<OrderedKernel> kernels;
  for (int m : kernel_orders)
    kernels.push_back(make_w(m));
  return ProductKernelSpec(std::move(kernels), bandwidth);
}

ModelFile
make_model(const SelectionConfig& cfg, const SelectionResult& result, const SampleSet& sample)
{
  ModelFile model;
  model.config = cfg;
  model.config.family.n = static_cast<std::int64_t>(sample.size());
  model.config.family.d = sample.dim();
  model.config.quad = cfg.quad.resolved(sample.dim());
  model.chosen = result.trace.chosen;
  for (const auto& k : result.spec.kernels()) {
    model.kernel_orders.push_back(k.order());
    model.kernel_coeffs.push_back(k.coeffs());
  }
  model.bandwidth = result.spec.bandwidth();
  model.trace = result.trace;
  model.sample = sample;
  return model;
}

std::string
serialize_model(const ModelFile& m)
{
  json records = json::array();
  for (const auto& r : m.trace.records)
    records.push_back({ { "ell", r.index.ell },
                        { "orders", r.orders },
                        { "bandwidth", r.bandwidth },
                        { "m_hat", r.m_hat },
                        { "b_hat", r.b_hat },
                        { "objective", r.objective } });
  json j = {
    { "schema_version", m.schema_version },
    { "config",
      { { "p", m.config.p },
        { "q", m.config.q },
        { "tau", m.config.tau },
        { "c", m.config.family.c },
        { "mode", to_string(m.config.family.mode) },
        { "n", m.config.family.n },
        { "d", m.config.family.d },
        { "orders", m.config.family.orders },
        { "quad_panels", m.config.quad.panels },
        { "quad_nodes", m.config.quad.nodes } } },
    { "chosen", m.chosen.ell },
    { "kernel_orders", m.kernel_orders },
    { "kernel_coeffs", m.kernel_coeffs },
    { "bandwidth", m.bandwidth },
    { "trace",
      { { "p", m.trace.p },
        { "q", m.trace.q },
        { "tau", m.trace.tau },
        { "records", records },
        { "pairwise_norms", m.trace.pairwise_norms },
        { "chosen_position", m.trace.chosen_position },
        { "chosen", m.trace.chosen.ell } } },
    { "sample",
      { { "d", m.sample.dim() }, { "n", m.sample.size() }, { "points", m.sample.data() } } },
  };
  return j.dump(2) + "\n";
}

ModelFile
parse_model(const std::string& text)
{
  try {
    const json j = json::parse(text);
    ModelFile m;
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != model_schema_version)
      throw Error(ErrorKind::parse_error,
                  "unsupported model schema_version " + std::to_string(m.schema_version));
    const json& c = j.at("config");
    m.config.p = c.at("p").get<double>();
    m.config.q = c.at("q").get<double>();
    m.config.tau = c.at("tau").get<double>();
    m.config.family.c = c.at("c").get<double>();
    m.config.family.mode = parse_family_mode(c.at("mode").get<std::string>());
    m.config.family.n = c.at("n").get<std::int64_t>();
    m.config.family.d = c.at("d").get<std::size_t>();
    m.config.family.orders = c.at("orders").get<std::vector<int>>();
    m.config.quad.panels = c.at("quad_panels").get<std::size_t>();
    m.config.quad.nodes = c.at("quad_nodes").get<std::size_t>();
    m.chosen.ell = j.at("chosen").get<std::vector<int>>();
    m.kernel_orders = j.at("kernel_orders").get<std::vector<int>>();
    m.kernel_coeffs = j.at("kernel_coeffs").get<std::vector<std::vector<double>>>();
    m.bandwidth = j.at("bandwidth").get<std::vector<double>>();
    const json& t = j.at("trace");
    m.trace.p = t.at("p").get<double>();
    m.trace.q = t.at("q").get<double>();
    m.trace.tau = t.at("tau").get<double>();
    for (const json& r : t.at("records")) {
      SelectionRecord rec;
      rec.index.ell = r.at("ell").get<std::vector<int>>();
      rec.orders = r.at("orders").get<std::vector<int>>();
      rec.bandwidth = r.at("bandwidth").get<std::vector<double>>();
      rec.m_hat = r.at("m_hat").get<double>();
      rec.b_hat = r.at("b_hat").get<double>();
      rec.objective = r.at("objective").get<double>();
      m.trace.records.push_back(std::move(rec));
    }
    m.trace.pairwise_norms = t.at("pairwise_norms").get<std::vector<std::vector<double>>>();
    m.trace.chosen_position = t.at("chosen_position").get<std::size_t>();
    m.trace.chosen.ell = t.at("chosen").get<std::vector<int>>();
    const json& s = j.at("sample");
    m.sample = SampleSet(s.at("d").get<std::size_t>(), s.at("points").get<std::vector<double>>());
    if (m.sample.size() != s.at("n").get<std::size_t>())
      throw Error(ErrorKind::parse_error, "model sample size does not match its point buffer");
    if (m.kernel_orders.size() != m.sample.dim() || m.bandwidth.size() != m.sample.dim())
      throw Error(ErrorKind::parse_error, "model kernel/bandwidth dimension mismatch");
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("malformed model file: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// command line

namespace {

std::string
config_scalar(const json& v)
{
  if (v.is_string())
    return v.get<std::string>();
  if (v.is_number_float())
    return format_double(v.get<double>());
  return v.dump();
}

// Replaces `--config FILE` by the options stored in FILE, a flat JSON
// object keyed by long option names. Options already on the command line
// win. Arrays become comma-separated lists; true adds a flag.
std::vector<std::string>
expand_config(std::vector<std::string> args)
{
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      path = args[k + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k),
                 args.begin() + static_cast<std::ptrdiff_t>(k + 2));
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  if (path.empty())
    return args;

  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::file_not_found, "cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, "config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorKind::parse_error, "config '" + path + "' must hold a JSON object");

  auto given = [&](const std::string& flag) {
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0)
        return true;
    return false;
  };
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (given(flag))
      continue;
    if (value.is_boolean()) {
      if (value.get<bool>())
        args.push_back(flag);
      continue;
    }
    std::string text;
    if (value.is_array()) {
      for (const auto& v : value)
        text += (text.empty() ? "" : ",") + config_scalar(v);
    } else {
      text = config_scalar(value);
    }
    args.push_back(flag);
    args.push_back(text);
  }
  return args;
}

void
write_text(const std::string& path, const std::string& text, std::ostream& out)
{
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw Error(ErrorKind::file_not_found, "cannot write '" + path + "'");
  f << text;
}

std::string
read_text(const std::string& path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw Error(ErrorKind::file_not_found, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct FamilyOptions
{
  std::string mode = "iso";
  double c = 1.0;
  std::vector<int> orders;
};

struct SelectionOptions
{
  FamilyOptions family;
  double p = 2.0;
  double q = 1.0;
  double tau = 1.0;
  std::size_t quad_panels = 0;
  std::size_t quad_nodes = 0;

  SelectionConfig config(std::size_t d) const
  {
    SelectionConfig cfg;
    cfg.p = p;
    cfg.q = q;
    cfg.tau = tau;
    cfg.family.d = d;
    cfg.family.c = family.c;
    cfg.family.mode = parse_family_mode(family.mode);
    cfg.family.orders = family.orders;
    cfg.quad.panels = quad_panels;
    cfg.quad.nodes = quad_nodes;
    cfg.validate();
    cfg.family.n = 2;
    cfg.family.validate();
    return cfg;
  }
};

void
add_selection_options(CLI::App* app, SelectionOptions& o)
{
  app->add_option("--mode", o.family.mode, "Family mode")
    ->check(CLI::IsMember({ "iso", "ani" }))
    ->capture_default_str();
  app->add_option("--p", o.p, "Norm exponent p >= 1")->capture_default_str();
  app->add_option("--q", o.q, "Risk exponent q >= 1")->capture_default_str();
  app->add_option("--tau", o.tau, "Penalty parameter tau > 0")->capture_default_str();
  app->add_option("--c", o.family.c, "Exponent of the (log n)^c volume floor")->capture_default_str();
  app->add_option("--orders", o.family.orders, "Kernel orders M_1,...,M_d (ani mode)")
    ->delimiter(',');
  app->add_option("--quad-panels", o.quad_panels, "Quadrature panels per half axis (0 = default)");
  app->add_option("--quad-nodes", o.quad_nodes, "Gauss nodes per panel (0 = default)");
}

// --- kernels ---------------------------------------------------------------

struct KernelsOptions
{
  int order = 0;
  std::size_t samples = 100;
  std::string out;
};

void
run_kernels(const KernelsOptions& o, std::ostream& out)
{
  if (o.samples == 0)
    throw Error(ErrorKind::invalid_argument, "--samples must be >= 1");
  const OrderedKernel w = make_w(o.order);
  std::ostringstream csv;
  csv << "u,w\n";
  for (std::size_t k = 0; k <= o.samples; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(o.samples);
    csv << format_double(u) << ',' << format_double(w(u)) << '\n';
  }
  write_text(o.out, csv.str(), out);
}

// --- family ----------------------------------------------------------------

struct FamilyCmdOptions
{
  std::int64_t n = 0;
  std::size_t d = 1;
  FamilyOptions family;
  std::string out;
};

void
run_family(const FamilyCmdOptions& o, std::ostream& out)
{
  FamilyConfig cfg;
  cfg.n = o.n;
  cfg.d = o.d;
  cfg.c = o.family.c;
  cfg.mode = parse_family_mode(o.family.mode);
  cfg.orders = o.family.orders;
  const auto indices = index_set(cfg);

  std::ostringstream csv;
  const std::size_t cols = cfg.mode == FamilyMode::iso ? 1 : cfg.d;
  auto header = [&](const char* name) {
    for (std::size_t i = 0; i < cols; ++i) {
      if (cols == 1)
        csv << name;
      else
        csv << name << '_' << i + 1;
      csv << (std::string(name) == "h" && i + 1 == cols ? "\n" : ",");
    }
  };
  header("ell");
  header("m");
  header("h");
  for (const auto& idx : indices) {
    const auto orders = member_orders(cfg, idx);
    const auto h = index_bandwidth(cfg, idx);
    for (std::size_t i = 0; i < cols; ++i)
      csv << idx.ell[i] << ',';
    for (std::size_t i = 0; i < cols; ++i)
      csv << orders[i] << ',';
    for (std::size_t i = 0; i < cols; ++i)
      csv << format_double(h[i]) << (i + 1 == cols ? "\n" : ",");
  }
  write_text(o.out, csv.str(), out);
}

// --- fit -------------------------------------------------------------------

struct FitOptions
{
  std::string input;
  std::string out;
  SelectionOptions selection;
};

void
run_fit(const FitOptions& o, std::ostream& out)
{
  const SampleSet sample = read_csv(o.input);
  const SelectionConfig cfg = o.selection.config(sample.dim());
  const SelectionResult result = select(sample, cfg);
  write_text(o.out, serialize_model(make_model(cfg, result, sample)), out);
}

// --- eval ------------------------------------------------------------------

struct EvalOptions
{
  std::string model;
  std::size_t grid_res = 101;
  std::string out;
  bool clip = false;
};

void
run_eval(const EvalOptions& o, std::ostream& out)
{
  if (o.grid_res < 2)
    throw Error(ErrorKind::invalid_argument, "--grid-res must be >= 2");
  const ModelFile model = parse_model(read_text(o.model));
  const ProductKernelSpec spec = model.spec();
  const std::size_t d = spec.dim();

  TensorGrid grid;
  std::vector<double> axis(o.grid_res);
  std::vector<double> axis_w(o.grid_res);
  for (std::size_t k = 0; k < o.grid_res; ++k) {
    axis[k] = static_cast<double>(k) / static_cast<double>(o.grid_res - 1);
    axis_w[k] = (k == 0 || k + 1 == o.grid_res ? 0.5 : 1.0) / static_cast<double>(o.grid_res - 1);
  }
  grid.axes.assign(d, axis);
  std::vector<double> values = estimate_grid(spec, model.sample, grid);
  if (o.clip) {
    // trapezoid weights for the renormalisation
    std::vector<double> weights(grid.size(), 1.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::size_t rem = k;
      for (std::size_t i = d; i-- > 0;) {
        weights[k] *= axis_w[rem % o.grid_res];
        rem /= o.grid_res;
      }
    }
    values = clip_negative(std::move(values), weights);
  }

  std::ostringstream csv;
  for (std::size_t i = 0; i < d; ++i)
    csv << "t_" << i + 1 << ',';
  csv << "fhat\n";
  std::vector<double> pt(d);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.point(k, pt);
    for (double v : pt)
      csv << format_double(v) << ',';
    csv << format_double(values[k]) << '\n';
  }
  write_text(o.out, csv.str(), out);
}

// --- simulate --------------------------------------------------------------

struct BiasOptions
{
  double p = 2.0;
  std::vector<double> h_list{ 0.02, 0.04, 0.08, 0.16 };
  std::size_t panels = 64;
  int order = 1;
  std::string out;
};

void
run_bias(const BiasOptions& o, std::ostream& out)
{
  const auto rows = bias_demo(o.p, o.h_list, o.panels, o.order);
  std::ostringstream csv;
  csv << "h,naive_bias,boundary_bias\n";
  for (const auto& r : rows)
    csv << format_double(r.h) << ',' << format_double(r.naive) << ','
        << format_double(r.boundary) << '\n';
  write_text(o.out, csv.str(), out);
}

struct SimOptions
{
  SelectionOptions selection;
  std::size_t d = 1;
  std::string density = "uniform";
  double rho = 0.5;
  double bump_h = 0.125;
  std::vector<std::size_t> n_list{ 500, 2000, 8000 };
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  std::string estimator = "selected";
  std::vector<int> ell;
  std::string out;
};

RiskSetup
make_setup(const SimOptions& o)
{
  RiskSetup setup;
  if (o.density == "uniform") {
    setup.truth = uniform_density(o.d);
    setup.envelope = 1.0;
  } else {
    const BumpFamilyParams params = alternating_bumps(o.d, o.bump_h, o.rho);
    setup.truth = bump_density(params);
    setup.envelope = bump_envelope(params);
  }
  QuadratureConfig quad;
  quad.panels = o.selection.quad_panels;
  quad.nodes = o.selection.quad_nodes;
  setup.grid = CubeGrid(o.d, quad);
  setup.p = o.selection.p;
  setup.q = o.selection.q;
  setup.replicates = o.reps;
  setup.seed = o.seed;
  return setup;
}

void
run_risk(const SimOptions& o, std::ostream& out)
{
  const SelectionConfig cfg = o.selection.config(o.d);
  const RiskSetup setup = make_setup(o);
  EstimatorFactory factory;
  if (o.estimator == "fixed") {
    if (o.ell.empty())
      throw Error(ErrorKind::invalid_argument, "--estimator fixed requires --ell");
    factory = fixed_member_estimator(cfg.family, FamilyIndex{ o.ell });
  } else {
    factory = selected_estimator(cfg);
  }
  const RiskReport report = risk_report(factory, setup, o.n_list);
  std::ostringstream csv;
  csv << "n,replicates,p,q,risk,std_error,slope\n";
  for (const auto& e : report.entries)
    csv << e.n << ',' << report.replicates << ',' << format_double(report.p) << ','
        << format_double(report.q) << ',' << format_double(e.risk) << ','
        << format_double(e.std_error) << ','
        << (std::isnan(report.slope) ? std::string("nan") : format_double(report.slope)) << '\n';
  write_text(o.out, csv.str(), out);
}

void
run_oracle(const SimOptions& o, std::ostream& out)
{
  const SelectionConfig cfg = o.selection.config(o.d);
  const RiskSetup setup = make_setup(o);
  if (o.n_list.size() != 1)
    throw Error(ErrorKind::invalid_argument, "simulate oracle takes exactly one --n-list value");
  const OracleReport report = oracle_experiment(cfg, setup, o.n_list.front());
  const double best = *std::min_element(report.member_risks.begin(), report.member_risks.end());
  std::ostringstream csv;
  csv << "replicate";
  const std::size_t cols = report.indices.front().ell.size();
  for (std::size_t i = 0; i < cols; ++i)
    csv << ",chosen_ell_" << i + 1;
  csv << ",selected_loss,best_member_risk,ratio\n";
  for (std::size_t k = 0; k < report.replicates.size(); ++k) {
    const auto& r = report.replicates[k];
    csv << k;
    for (int l : r.chosen.ell)
      csv << ',' << l;
    csv << ',' << format_double(r.selected_loss) << ',' << format_double(best) << ','
        << format_double(r.ratio) << '\n';
  }
  write_text(o.out, csv.str(), out);
}

// Listed for --help only; the file is expanded before parsing.
void
add_config_option(CLI::App* app)
{
  app->add_option_function<std::string>(
    "--config", [](const std::string&) {}, "JSON file of option values (command line wins)");
}

void
add_sim_options(CLI::App* app, SimOptions& o)
{
  add_selection_options(app, o.selection);
  app->add_option("--d", o.d, "Dimension")->capture_default_str();
  app->add_option("--density", o.density, "True density")
    ->check(CLI::IsMember({ "uniform", "bump" }))
    ->capture_default_str();
  app->add_option("--rho", o.rho, "Bump amplitude")->capture_default_str();
  app->add_option("--bump-h", o.bump_h, "Bump half-width (1/(2h) must be an integer)")
    ->capture_default_str();
  app->add_option("--n-list", o.n_list, "Sample sizes")->delimiter(',');
  app->add_option("--reps", o.reps, "Replicates per sample size")->capture_default_str();
  app->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app->add_option("--estimator", o.estimator, "selected | fixed")
    ->check(CLI::IsMember({ "selected", "fixed" }))
    ->capture_default_str();
  app->add_option("--ell", o.ell, "Family index for --estimator fixed")->delimiter(',');
  app->add_option("--out", o.out, "Output CSV (default stdout)");
  add_config_option(app);
}

int
exit_code_for(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::empty_family:
      return exit_empty_family;
    case ErrorKind::invalid_argument:
    case ErrorKind::order_too_large:
    case ErrorKind::index_not_in_family:
    case ErrorKind::invalid_amplitude:
      return exit_usage;
    default:
      return exit_data;
  }
}

} // namespace

int
run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Boundary-corrected kernel density estimation on [0,1]^d", "boundkde" };
  app.require_subcommand(1);

  KernelsOptions kernels_opts;
  auto* kernels = app.add_subcommand("kernels", "Tabulate the order-m kernel w_m on [0,1]");
  kernels->add_option("--order", kernels_opts.order, "Kernel order m")->required();
  kernels->add_option("--samples", kernels_opts.samples, "Number of intervals N (N+1 points)")
    ->required();
  kernels->add_option("--out", kernels_opts.out, "Output CSV (default stdout)");

  FamilyCmdOptions family_opts;
  auto* family = app.add_subcommand("family", "List the candidate family");
  family->add_option("--n", family_opts.n, "Sample size")->required();
  family->add_option("--d", family_opts.d, "Dimension")->capture_default_str();
  family->add_option("--c", family_opts.family.c, "Volume floor exponent")->capture_default_str();
  family->add_option("--mode", family_opts.family.mode, "iso | ani")
    ->check(CLI::IsMember({ "iso", "ani" }))
    ->capture_default_str();
  family->add_option("--orders", family_opts.family.orders, "Kernel orders (ani)")->delimiter(',');
  family->add_option("--out", family_opts.out, "Output CSV (default stdout)");

  FitOptions fit_opts;
  auto* fit = app.add_subcommand("fit", "Select an estimator and write model.json");
  fit->add_option("--input", fit_opts.input, "CSV sample")->required();
  fit->add_option("--out", fit_opts.out, "Model JSON path")->required();
  add_selection_options(fit, fit_opts.selection);
  add_config_option(fit);

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "Evaluate a fitted model on a regular grid");
  eval->add_option("--model", eval_opts.model, "Model JSON")->required();
  eval->add_option("--grid-res", eval_opts.grid_res, "Points per axis")->capture_default_str();
  eval->add_option("--out", eval_opts.out, "Output CSV (default stdout)");
  eval->add_flag("--clip-negative", eval_opts.clip, "Truncate negative values and renormalise");

  auto* simulate = app.add_subcommand("simulate", "Simulation experiments");
  simulate->require_subcommand(1);

  BiasOptions bias_opts;
  auto* bias = simulate->add_subcommand("bias", "Exact boundary bias on the uniform density");
  bias->add_option("--p", bias_opts.p, "Norm exponent")->capture_default_str();
  bias->add_option("--h-list", bias_opts.h_list, "Bandwidths")->delimiter(',');
  bias->add_option("--panels", bias_opts.panels, "Quadrature panels per smooth piece")
    ->capture_default_str();
  bias->add_option("--order", bias_opts.order, "Boundary kernel order")->capture_default_str();
  bias->add_option("--out", bias_opts.out, "Output CSV (default stdout)");
  add_config_option(bias);

  SimOptions risk_opts;
  auto* risk = simulate->add_subcommand("risk", "Monte Carlo L_p risk over sample sizes");
  add_sim_options(risk, risk_opts);

  SimOptions oracle_opts;
  oracle_opts.n_list = { 2000 };
  oracle_opts.density = "bump";
  auto* oracle = simulate->add_subcommand("oracle", "Selected versus best fixed member");
  add_sim_options(oracle, oracle_opts);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const Error& e) {
    err << "error: " << error_tag(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (*kernels)
      run_kernels(kernels_opts, out);
    else if (*family)
      run_family(family_opts, out);
    else if (*fit)
      run_fit(fit_opts, out);
    else if (*eval)
      run_eval(eval_opts, out);
    else if (*bias)
      run_bias(bias_opts, out);
    else if (*risk)
      run_risk(risk_opts, out);
    else if (*oracle)
      run_oracle(oracle_opts, out);
  } catch (const Error& e) {
    err << "error: " << error_tag(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << '\n';
    return exit_data;
  }
  return exit_ok;
}

} // namespace boundkde
