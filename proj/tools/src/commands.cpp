#include "layergreen_cli/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "layergreen/error.hpp"
#include "layergreen/images.hpp"
#include "layergreen/kernel.hpp"
#include "layergreen/parallel.hpp"
#include "layergreen/quadrature.hpp"
#include "layergreen_cli/parse.hpp"

namespace layergreen::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kCommands{"eval", "norm", "sweep", "slice"};

std::string csv_echo(const ConfigEcho& echo) {
  std::string s;
  for (const auto& [k, v] : echo) s += "# " + k + "=" + v + "\n";
  return s;
}

ordered_json json_echo(const ConfigEcho& echo) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : echo) j[k] = v;
  return j;
}

ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write " + path);
  f << text;
}

images::Domain parse_domain(const std::string& s) {
  if (s == "cube") return images::Domain::cube;
  if (s == "slab") return images::Domain::slab;
  throw DomainError("domain must be cube or slab");
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::string join_ws(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& t : v) s += (s.empty() ? "" : " ") + t;
  return s;
}

struct Common {
  std::string format = "csv";
  std::string output;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output,-o", c.output, "output file (default stdout)");
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  Common common;
  std::string target = "g";
  std::string eps = "0.1";
  std::string alpha = "1";
  std::string beta = "0";
  std::string x;
  std::string xi;
  std::string domain = "cube";
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto x = parse_list(a.x);
  const auto xi = parse_list(a.xi);
  if (x.size() != xi.size()) throw DomainError("x and xi must have the same dimension");
  const auto params = ProblemParams::make(parse_number(a.eps), parse_number(a.alpha), parse_number(a.beta),
                                          static_cast<int>(x.size()));
  const ConfigEcho echo{{"command", "eval"},   {"target", a.target},         {"eps", a.eps},
                        {"alpha", a.alpha},    {"beta", a.beta},             {"x", join_numbers(x)},
                        {"xi", join_numbers(xi)}, {"domain", a.domain},      {"format", a.common.format}};

  std::vector<std::pair<std::string, double>> values;
  auto same = [&] {
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] != xi[k]) return false;
    }
    return true;
  };
  if (a.target == "g") {
    const auto frame = make_frame(x, xi, params, x[0]);
    values.emplace_back("g", params.dim() == 3 ? g_crd(params, frame) : g_nd(params, frame));
  } else if (a.target == "gbar_slab") {
    values.emplace_back("gbar_slab", images::gbar_slab(params, x, xi));
  } else if (a.target == "gbar_cube") {
    values.emplace_back("gbar_cube", images::gbar_cube(params, x, xi));
  } else if (a.target == "derivs" || a.target == "phi") {
    DerivativeBundle b;
    double phi = 0.0;
    if (a.domain == "free") {
      if (same()) throw PoleError("xi coincides with the pole");
      const auto frame = make_frame(x, xi, params, x[0]);
      b = params.dim() == 3 ? g_crd_derivs(params, frame) : g2d_derivs(params, frame);
      phi = adjoint_residual(params, b);
    } else {
      const images::Approximation approx(params, x, parse_domain(a.domain));
      const auto jet = approx.jet(xi);
      b = jet.bundle;
      phi = jet.phi;
    }
    if (a.target == "phi") {
      values.emplace_back("phi", phi);
    } else {
      values = {{"g", b.g}, {"d1", b.d1}, {"d2", b.d2}, {"d3", b.d3},
                {"d11", b.d11}, {"d22", b.d22}, {"d33", b.d33}};
    }
  } else {
    throw DomainError("unknown target '" + a.target + "' (g, gbar_slab, gbar_cube, derivs, phi)");
  }

  std::string text;
  if (a.common.format == "json") {
    ordered_json j;
    j["config"] = json_echo(echo);
    ordered_json r = ordered_json::object();
    for (const auto& [k, v] : values) r[k] = json_number(v);
    j["result"] = r;
    text = j.dump(2) + "\n";
  } else {
    text = csv_echo(echo);
    std::string header;
    std::string row;
    for (const auto& [k, v] : values) {
      header += (header.empty() ? "" : ",") + k;
      row += (row.empty() ? "" : ",") + format_number(v);
    }
    text += header + "\n" + row + "\n";
  }
  emit(text, a.common.output, out);
  return ExitCode::ok;
}

// ---------------------------------------------------------------- norm

struct NormArgs {
  Common common;
  std::string quantity = "d1";
  std::vector<std::string> region{"cube"};
  std::string eps = "0.0625";
  std::string alpha = "1";
  std::string x = "0.5,0.5,0.5";
  std::string tol = "1e-3";
  std::string max_evals = "20000000";
  std::string method = "adaptive";
  std::string oracle_n = "128";
  std::string selftest = "none";
};

int cmd_norm(const NormArgs& a, std::ostream& out) {
  const auto x = parse_list(a.x);
  const auto params = ProblemParams::make(parse_number(a.eps), parse_number(a.alpha), 0.0,
                                          static_cast<int>(x.size()));
  const auto region_tokens = split_ws(join_ws(a.region));
  if (region_tokens.empty()) throw DomainError("missing region");
  const std::string kind = region_tokens[0];
  double rho = 0.0;
  if (kind == "ball" || kind == "minusball") {
    if (region_tokens.size() != 2) throw DomainError("region " + kind + " needs a radius");
    rho = parse_number(region_tokens[1]);
  } else if (region_tokens.size() != 1 || (kind != "cube" && kind != "slab")) {
    throw DomainError("region must be cube, slab, ball RHO or minusball RHO");
  }
  const bool slab = kind == "slab";
  auto region = slab ? quadrature::Region::slab(x) : quadrature::Region::unit_cube(x);
  if (kind == "ball") region = region.intersect_ball(rho);
  if (kind == "minusball") region = region.minus_ball(rho);

  const ConfigEcho echo{{"command", "norm"},
                        {"quantity", a.quantity},
                        {"region", join_ws(region_tokens)},
                        {"eps", a.eps},
                        {"alpha", a.alpha},
                        {"x", join_numbers(x)},
                        {"tol", a.tol},
                        {"max-evals", a.max_evals},
                        {"method", a.method},
                        {"oracle-n", a.oracle_n},
                        {"selftest", a.selftest},
                        {"format", a.common.format}};

  quadrature::QuadratureOptions opt;
  opt.rel_tol = parse_number(a.tol);
  opt.max_evaluations = static_cast<std::size_t>(parse_number(a.max_evals));

  const int dim = params.dim();
  const auto domain = slab ? images::Domain::slab : images::Domain::cube;
  quadrature::NormEstimate est;
  const bool oracle = a.method == "oracle";
  if (!oracle && a.method != "adaptive") throw DomainError("method must be adaptive or oracle");
  const int oracle_n = static_cast<int>(parse_number(a.oracle_n));

  if (a.selftest == "volume") {
    const quadrature::ScalarField one = [](const quadrature::SamplePoint&) { return 1.0; };
    est = oracle ? quadrature::oracle_riemann(one, region, params, oracle_n) : quadrature::l1_norm(one, region, params, opt);
  } else if (a.selftest != "none") {
    throw DomainError("selftest must be none or volume");
  } else {
    const images::Approximation approx(params, x, domain);
    if (a.quantity == "w11") {
      const quadrature::BundleField f = [&](const quadrature::SamplePoint& p) {
        return approx.jet_offset(p.scaled()).bundle;
      };
      if (oracle) {
        const quadrature::ScalarField s = [&](const quadrature::SamplePoint& p) {
          const auto b = f(p);
          double v = std::abs(b.g);
          for (int k = 0; k < dim; ++k) v += std::abs(b.grad(k));
          return v;
        };
        est = quadrature::oracle_riemann(s, region, params, oracle_n);
      } else {
        est = quadrature::w11_norm(f, region, params, opt);
      }
    } else {
      static const std::vector<std::string> names{"g", "d1", "d2", "d3", "d11", "d22", "d33"};
      const auto it = std::find(names.begin(), names.end(), a.quantity);
      if (it == names.end()) throw DomainError("quantity must be one of g, d1, d2, d3, d11, d22, d33, w11");
      const auto idx = it - names.begin();
      if (dim == 2 && (a.quantity == "d3" || a.quantity == "d33")) throw DomainError("quantity needs dimension 3");
      const quadrature::ScalarField f = [&](const quadrature::SamplePoint& p) {
        const auto b = approx.jet_offset(p.scaled()).bundle;
        switch (idx) {
          case 0: return b.g;
          case 1: return b.d1;
          case 2: return b.d2;
          case 3: return b.d3;
          case 4: return b.d11;
          case 5: return b.d22;
          default: return b.d33;
        }
      };
      est = oracle ? quadrature::oracle_riemann(f, region, params, oracle_n) : quadrature::l1_norm(f, region, params, opt);
    }
  }

  std::string text;
  if (a.common.format == "json") {
    ordered_json j;
    j["config"] = json_echo(echo);
    j["result"] = {{"value", est.value},
                   {"error_estimate", est.error_estimate},
                   {"evaluations", est.evaluations},
                   {"converged", est.converged}};
    text = j.dump(2) + "\n";
  } else {
    text = csv_echo(echo) + "value,error_estimate,evaluations,converged\n" + format_number(est.value) + "," +
           format_number(est.error_estimate) + "," + std::to_string(est.evaluations) + "," +
           (est.converged ? "true" : "false") + "\n";
  }
  emit(text, a.common.output, out);
  return est.converged ? ExitCode::ok : ExitCode::not_converged;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  Common common;
  std::string spec = "all";
  std::string eps = "2^-4..2^-10";
  std::string domain = "cube";
  std::string x = "0.5,0.5,0.5";
  std::string alpha = "1";
  std::string tol = "1e-3";
  std::string rho;
  std::string max_evals = "20000000";
  std::string synthetic;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  std::vector<const sweep::BoundSpec*> specs;
  if (a.spec == "all") {
    for (const auto& s : sweep::builtin_catalog()) specs.push_back(&s);
  } else {
    specs.push_back(&sweep::find_spec(a.spec));
  }
  sweep::SweepConfig cfg;
  cfg.eps_list = parse_eps_list(a.eps);
  cfg.x = parse_list(a.x);
  cfg.domain = parse_domain(a.domain);
  cfg.alpha = parse_number(a.alpha);
  cfg.quadrature.rel_tol = parse_number(a.tol);
  cfg.quadrature.max_evaluations = static_cast<std::size_t>(parse_number(a.max_evals));
  if (!a.rho.empty()) cfg.rho_override = parse_list(a.rho);
  if (!a.synthetic.empty()) {
    const double c = parse_number(a.synthetic);
    cfg.provider = [c](const sweep::BoundSpec& spec, const ProblemParams& params, const quadrature::Region& region,
                       std::span<const double>, images::Domain, const quadrature::QuadratureOptions&) {
      const bool ball = region.modifier == quadrature::Modifier::intersect_ball ||
                        region.modifier == quadrature::Modifier::minus_ball;
      quadrature::NormEstimate e;
      e.value = c * spec.shape(params.eps(), ball ? region.rho : 0.0);
      e.evaluations = 1;
      e.converged = true;
      return e;
    };
  }

  ConfigEcho echo{{"command", "sweep"},  {"spec", a.spec},    {"eps", join_numbers(cfg.eps_list)},
                  {"domain", a.domain},  {"x", join_numbers(cfg.x)}, {"alpha", a.alpha},
                  {"tol", a.tol},        {"max-evals", a.max_evals}};
  if (cfg.rho_override) echo.emplace_back("rho", join_numbers(*cfg.rho_override));
  if (!a.synthetic.empty()) echo.emplace_back("synthetic", a.synthetic);
  echo.emplace_back("format", a.common.format);

  std::vector<sweep::SweepReport> reports;
  for (const auto* s : specs) reports.push_back(sweep::run_sweep(*s, cfg));
  emit(a.common.format == "json" ? sweep_json(echo, reports) : sweep_csv(echo, reports), a.common.output, out);
  const bool pass = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
  return pass ? ExitCode::ok : ExitCode::bound_failed;
}

// ---------------------------------------------------------------- slice

struct SliceArgs {
  Common common;
  std::string eps = "0.01";
  std::string alpha = "1";
  std::string x = "1/5,1/2,1/3";
  std::string plane = "xi3=x3";
  std::string resolution = "201";
  std::string isovalues = "1,4,8,16,32,64,128,256";
  std::string contours;
};

int cmd_slice(const SliceArgs& a, std::ostream& out) {
  SliceConfig c;
  c.eps = parse_number(a.eps);
  c.alpha = parse_number(a.alpha);
  c.x = parse_list(a.x);
  if (c.x.size() != 3) throw DomainError("slice needs a 3D pole");
  const auto eq = a.plane.find('=');
  if (eq == std::string::npos || a.plane.size() < 4 || a.plane.rfind("xi", 0) != 0) {
    throw DomainError("plane must look like xi3=x3 or xi3=0.25");
  }
  c.plane_axis = std::stoi(a.plane.substr(2, eq - 2)) - 1;
  if (c.plane_axis < 0 || c.plane_axis > 2) throw DomainError("plane axis must be 1, 2 or 3");
  const std::string rhs = a.plane.substr(eq + 1);
  if (rhs.size() == 2 && rhs[0] == 'x' && rhs[1] >= '1' && rhs[1] <= '3') {
    c.plane_value = c.x[static_cast<std::size_t>(rhs[1] - '1')];
  } else {
    c.plane_value = parse_number(rhs);
  }
  if (!(c.plane_value >= 0.0 && c.plane_value <= 1.0)) throw DomainError("plane lies outside the unit cube");
  c.resolution = static_cast<int>(parse_number(a.resolution));
  c.isovalues = a.isovalues.empty() || a.isovalues == "none" ? std::vector<double>{} : parse_list(a.isovalues);

  const ConfigEcho echo{{"command", "slice"},
                        {"eps", a.eps},
                        {"alpha", a.alpha},
                        {"x", join_numbers(c.x)},
                        {"plane", a.plane},
                        {"resolution", a.resolution},
                        {"isovalues", a.isovalues},
                        {"format", a.common.format}};
  const SliceResult r = compute_slice(c);
  std::array<std::string, 2> names;
  {
    int n = 0;
    for (int k = 0; k < 3; ++k) {
      if (k != c.plane_axis) names[static_cast<std::size_t>(n++)] = "xi" + std::to_string(k + 1);
    }
  }
  const std::size_t nu = r.grid.x.size();
  const std::size_t nv = r.grid.y.size();

  if (a.common.format == "json") {
    ordered_json j;
    j["config"] = json_echo(echo);
    ordered_json g;
    g["axes"] = {names[0], names[1]};
    g["u"] = r.grid.x;
    g["v"] = r.grid.y;
    ordered_json vals = ordered_json::array();
    for (double v : r.grid.values) vals.push_back(json_number(v));
    g["values"] = vals;
    j["grid"] = g;
    ordered_json cs = ordered_json::array();
    for (const auto& [level, lines] : r.contours) {
      ordered_json lj = ordered_json::array();
      for (const auto& l : lines) {
        ordered_json pts = ordered_json::array();
        for (const auto& p : l.points) pts.push_back({p[0], p[1]});
        lj.push_back({{"closed", l.closed}, {"points", pts}});
      }
      cs.push_back({{"level", level}, {"lines", lj}});
    }
    j["contours"] = cs;
    emit(j.dump(1) + "\n", a.common.output, out);
  } else {
    std::string text = csv_echo(echo) + names[0] + "," + names[1] + ",value\n";
    for (std::size_t jv = 0; jv < nv; ++jv) {
      for (std::size_t iu = 0; iu < nu; ++iu) {
        text += format_number(r.grid.x[iu]) + "," + format_number(r.grid.y[jv]) + "," +
                format_number(r.grid.at(iu, jv)) + "\n";
      }
    }
    emit(text, a.common.output, out);
    if (!a.contours.empty()) {
      std::string ct = csv_echo(echo) + "level,line,closed,index," + names[0] + "," + names[1] + "\n";
      for (const auto& [level, lines] : r.contours) {
        for (std::size_t li = 0; li < lines.size(); ++li) {
          for (std::size_t pi = 0; pi < lines[li].points.size(); ++pi) {
            ct += format_number(level) + "," + std::to_string(li) + "," + (lines[li].closed ? "true" : "false") +
                  "," + std::to_string(pi) + "," + format_number(lines[li].points[pi][0]) + "," +
                  format_number(lines[li].points[pi][1]) + "\n";
          }
        }
      }
      emit(ct, a.contours, out);
    }
  }
  return ExitCode::ok;
}

// Rewrites "--config FILE" into trailing flags so that file values win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  const ConfigEcho cfg = read_config(path);
  bool has_command = false;
  for (const auto& t : rest) {
    if (std::find(kCommands.begin(), kCommands.end(), t) != kCommands.end()) has_command = true;
  }
  std::vector<std::string> out;
  if (!has_command) {
    for (const auto& [k, v] : cfg) {
      if (k == "command") out.push_back(v);
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  for (const auto& [k, v] : cfg) {
    if (k == "command") continue;
    out.push_back("--" + k);
    out.push_back(v);
  }
  return out;
}

}  // namespace

ConfigEcho read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  ConfigEcho out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::ordered_json::parse(text);
    if (!j.contains("config")) throw DomainError("JSON config file has no config object");
    for (const auto& [k, v] : j["config"].items()) {
      out.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
    return out;
  }
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string body = line;
    if (body.rfind("# ", 0) == 0) body = body.substr(2);
    const auto b = body.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      if (line.rfind('#', 0) == 0) continue;
      break;
    }
    out.emplace_back(body.substr(b, eq - b), body.substr(eq + 1));
  }
  return out;
}

SliceResult compute_slice(const SliceConfig& c) {
  if (c.resolution < 2 || c.resolution > 4001) throw DomainError("resolution must be in [2, 4001]");
  const auto params = ProblemParams::make(c.eps, c.alpha, 0.0, 3);
  const images::Approximation approx(params, c.x, images::Domain::cube);
  SliceResult r;
  const auto n = static_cast<std::size_t>(c.resolution);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    r.grid.x.push_back(t);
    r.grid.y.push_back(t);
  }
  int free_axes[2];
  {
    int m = 0;
    for (int k = 0; k < 3; ++k) {
      if (k != c.plane_axis) free_axes[m++] = k;
    }
  }
  r.grid.values.assign(n * n, 0.0);
  parallel_for(n, [&](std::size_t j) {
    for (std::size_t i = 0; i < n; ++i) {
      std::array<double, 3> xi{};
      xi[static_cast<std::size_t>(c.plane_axis)] = c.plane_value;
      xi[static_cast<std::size_t>(free_axes[0])] = r.grid.x[i];
      xi[static_cast<std::size_t>(free_axes[1])] = r.grid.y[j];
      double v = 0.0;
      if (xi[0] == c.x[0] && xi[1] == c.x[1] && xi[2] == c.x[2]) {
        v = std::numeric_limits<double>::infinity();
      } else {
        v = approx.value(xi);
      }
      r.grid.values[j * n + i] = v;
    }
  });
  for (double level : c.isovalues) r.contours.emplace_back(level, contour::isolines(r.grid, level));
  return r;
}

std::string sweep_csv(const ConfigEcho& echo, const std::vector<sweep::SweepReport>& reports) {
  std::string s = csv_echo(echo);
  s += "spec,side,eps,rho,value,error_estimate,ratio,evaluations,converged,tainted\n";
  for (const auto& r : reports) {
    for (const auto& row : r.rows) {
      s += r.spec + "," + sweep::to_string(r.side) + "," + format_number(row.eps) + "," + format_number(row.rho) +
           "," + format_number(row.value) + "," + format_number(row.error_estimate) + "," +
           format_number(row.ratio) + "," + std::to_string(row.evaluations) + "," +
           (row.converged ? "true" : "false") + "," + (row.tainted ? "true" : "false") + "\n";
    }
  }
  for (const auto& r : reports) {
    s += "# band spec=" + r.spec + " side=" + sweep::to_string(r.side) + " shape=\"" + r.shape_label +
         "\" c_min=" + format_number(r.band.c_min) + " c_max=" + format_number(r.band.c_max) +
         " spread=" + format_number(r.band.spread) + " growth=" + format_number(r.band.growth) +
         " slope=" + format_number(r.band.slope) + " threshold=" + format_number(r.threshold) +
         " verdict=" + (r.pass ? "pass" : "fail") + "\n";
    for (const auto& note : r.notes) s += "# note spec=" + r.spec + " " + note + "\n";
  }
  s += "# note norms are computed for the image approximation (slab or cube), whose defect is exponentially "
       "small in 1/eps\n";
  return s;
}

std::string sweep_json(const ConfigEcho& echo, const std::vector<sweep::SweepReport>& reports) {
  ordered_json j;
  j["config"] = json_echo(echo);
  j["substitution"] =
      "norms are computed for the image approximation (slab or cube), whose defect is exponentially small in 1/eps";
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json rj;
    rj["spec"] = r.spec;
    rj["side"] = sweep::to_string(r.side);
    rj["shape"] = r.shape_label;
    rj["threshold"] = r.threshold;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
      rows.push_back({{"eps", row.eps},
                      {"rho", row.rho},
                      {"value", row.value},
                      {"error_estimate", row.error_estimate},
                      {"ratio", json_number(row.ratio)},
                      {"evaluations", row.evaluations},
                      {"converged", row.converged},
                      {"tainted", row.tainted}});
    }
    rj["rows"] = rows;
    rj["band"] = {{"c_min", r.band.c_min},   {"c_max", r.band.c_max}, {"spread", r.band.spread},
                  {"growth", r.band.growth}, {"slope", r.band.slope}, {"valid_rows", r.band.valid_rows}};
    rj["verdict"] = r.pass ? "pass" : "fail";
    rj["notes"] = r.notes;
    arr.push_back(rj);
  }
  j["reports"] = arr;
  return j.dump(2) + "\n";
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Green's-function kernels, image approximations and norm scaling sweeps", "layergreen"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "Evaluate a kernel, approximation, derivatives or defect at one point");
  add_common(ev, ea.common);
  ev->add_option("--target", ea.target, "g | gbar_slab | gbar_cube | derivs | phi");
  ev->add_option("--eps", ea.eps);
  ev->add_option("--alpha", ea.alpha);
  ev->add_option("--beta", ea.beta);
  ev->add_option("--x", ea.x, "pole, comma separated")->required();
  ev->add_option("--xi", ea.xi, "evaluation point")->required();
  ev->add_option("--domain", ea.domain, "cube | slab | free (derivs, phi)");

  NormArgs na;
  auto* nm = app.add_subcommand("norm", "L1 or W11 norm of the image approximation over a region");
  add_common(nm, na.common);
  nm->add_option("--quantity", na.quantity, "g | d1 | d2 | d3 | d11 | d22 | d33 | w11");
  nm->add_option("--region", na.region, "cube | slab | ball RHO | minusball RHO")->expected(1, 2);
  nm->add_option("--eps", na.eps);
  nm->add_option("--alpha", na.alpha);
  nm->add_option("--x", na.x);
  nm->add_option("--tol", na.tol, "relative tolerance");
  nm->add_option("--max-evals", na.max_evals);
  nm->add_option("--method", na.method, "adaptive | oracle");
  nm->add_option("--oracle-n", na.oracle_n, "oracle points per axis");
  nm->add_option("--selftest", na.selftest, "none | volume");

  SweepArgs sa;
  auto* sw = app.add_subcommand("sweep", "Run scaling-law sweeps from the bound catalog");
  add_common(sw, sa.common);
  sw->add_option("--spec", sa.spec, "catalog name or all");
  sw->add_option("--eps", sa.eps, "list or range 2^-a..2^-b");
  sw->add_option("--domain", sa.domain, "cube | slab");
  sw->add_option("--x", sa.x);
  sw->add_option("--alpha", sa.alpha);
  sw->add_option("--tol", sa.tol);
  sw->add_option("--rho", sa.rho, "explicit radii for ball specs");
  sw->add_option("--max-evals", sa.max_evals);
  sw->add_option("--synthetic", sa.synthetic, "replace each norm by C * shape (test hook)");

  SliceArgs la;
  auto* sl = app.add_subcommand("slice", "Cube approximation on a coordinate plane with isolines");
  add_common(sl, la.common);
  sl->add_option("--eps", la.eps);
  sl->add_option("--alpha", la.alpha);
  sl->add_option("--x", la.x);
  sl->add_option("--plane", la.plane, "e.g. xi3=x3 or xi3=0.25");
  sl->add_option("--resolution", la.resolution, "grid points per axis");
  sl->add_option("--isovalues", la.isovalues, "comma separated levels or none");
  sl->add_option("--contours", la.contours, "CSV file for isolines");

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::ok : ExitCode::usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::usage;
  }

  try {
    if (*ev) return cmd_eval(ea, out);
    if (*nm) return cmd_norm(na, out);
    if (*sw) return cmd_sweep(sa, out);
    if (*sl) return cmd_slice(la, out);
  } catch (const PoleError& e) {
    err << "pole: " << e.what() << "\n";
    return ExitCode::pole;
  } catch (const SingularityError& e) {
    err << "not converged: " << e.what() << "\n";
    return ExitCode::not_converged;
  } catch (const SweepError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::usage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::usage;
  }
  return ExitCode::usage;
}

}  // namespace layergreen::cli
