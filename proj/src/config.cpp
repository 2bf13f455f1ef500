#include "mats/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "mats/expr.hpp"

namespace mats {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  try {
    size_t end = 0;
    const double v = std::stod(s, &end);
    if (end != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
  }
}

std::vector<double> to_doubles(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : split_ws(s)) out.push_back(to_double(tok, key));
  return out;
}

Vec2 to_vec2(const std::string& s, const std::string& key) {
  const auto v = to_doubles(s, key);
  if (v.size() != 2) throw ConfigError("key '" + key + "': expected two numbers");
  return Vec2(v[0], v[1]);
}

bool to_bool(const std::string& s, const std::string& key) {
  if (s == "on" || s == "true" || s == "1") return true;
  if (s == "off" || s == "false" || s == "0") return false;
  throw ConfigError("key '" + key + "': expected on/off");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  std::map<std::string, std::string> kv;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    // trim
    const size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const size_t b2 = s.find_first_not_of(" \t");
      const size_t e2 = s.find_last_not_of(" \t");
      s = (b2 == std::string::npos) ? "" : s.substr(b2, e2 - b2 + 1);
    };
    trim(key);
    trim(val);
    const std::string full = section.empty() ? key : section + "." + key;
    if (kv.count(full))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
    kv[full] = val;
  }

  for (const auto& [key, val] : kv) {
    if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_double(val, key));
    else if (key == "problem.preset") cfg.preset = val;
    else if (key == "problem.model") cfg.model = val;
    else if (key == "problem.domain") cfg.domain = val;
    else if (key == "problem.lower") cfg.lower = to_vec2(val, key);
    else if (key == "problem.upper") cfg.upper = to_vec2(val, key);
    else if (key == "problem.center") cfg.center = to_vec2(val, key);
    else if (key == "problem.radius") cfg.radius = to_double(val, key);
    else if (key == "problem.h") cfg.h = to_double(val, key);
    else if (key == "problem.phi") cfg.phi = val;
    else if (key == "problem.subsolution") cfg.subsolution = val;
    else if (key == "problem.B") cfg.B = val;
    else if (key == "problem.psi") cfg.psi = val;
    else if (key == "problem.map_mx") cfg.map_mx = to_doubles(val, key);
    else if (key == "problem.map_mp") cfg.map_mp = to_doubles(val, key);
    else if (key == "problem.map_y0") cfg.map_y0 = to_doubles(val, key);
    else if (key == "solver.tol") cfg.solver.tol = to_double(val, key);
    else if (key == "solver.max_newton") cfg.solver.max_newton = static_cast<int>(to_double(val, key));
    else if (key == "solver.t_init") cfg.solver.t_init = to_double(val, key);
    else if (key == "solver.t_min") cfg.solver.t_min = to_double(val, key);
    else if (key == "solver.eps_ell_factor") cfg.solver.eps_ell_factor = to_double(val, key);
    else if (key == "checks.run") cfg.checks = split_ws(val);
    else if (key == "checks.samples_x") cfg.samples_x = static_cast<int>(to_double(val, key));
    else if (key == "checks.samples_p") cfg.samples_p = static_cast<int>(to_double(val, key));
    else if (key == "checks.directions") cfg.directions = static_cast<int>(to_double(val, key));
    else if (key == "checks.p_lower") cfg.p_lower = to_vec2(val, key);
    else if (key == "checks.p_upper") cfg.p_upper = to_vec2(val, key);
    else if (key == "checks.mu0") cfg.mu0 = to_double(val, key);
    else if (key == "checks.delta0") cfg.delta0 = to_double(val, key);
    else if (key == "checks.phibar") cfg.phibar = val;
    else if (key == "study.h_list") cfg.h_list = to_doubles(val, key);
    else if (key == "study.reference") cfg.reference = val;
    else if (key == "output.dir") cfg.out_dir = val;
    else if (key == "output.formats") {
      cfg.csv = false;
      cfg.vtk = false;
      for (const auto& f : split_ws(val)) {
        if (f == "csv") cfg.csv = true;
        else if (f == "vtk") cfg.vtk = true;
        else throw ConfigError("key 'output.formats': unknown format '" + f + "'");
      }
    } else if (key == "output.trace") cfg.trace = to_bool(val, key);
    else throw ConfigError("unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string resolved_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  auto num = [](double v) { return format_double(v); };
  auto vec = [&](const Vec2& v) { return num(v.x()) + " " + num(v.y()); };
  auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v[i]);
    return s;
  };
  auto words = [](const std::vector<std::string>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
    return s;
  };
  os << "seed = " << cfg.seed << "\n\n";
  os << "[problem]\n";
  os << "preset = " << cfg.preset << "\n";
  os << "model = " << cfg.model << "\n";
  os << "domain = " << cfg.domain << "\n";
  os << "lower = " << vec(cfg.lower) << "\n";
  os << "upper = " << vec(cfg.upper) << "\n";
  os << "center = " << vec(cfg.center) << "\n";
  os << "radius = " << num(cfg.radius) << "\n";
  os << "h = " << num(cfg.h) << "\n";
  os << "phi = " << cfg.phi << "\n";
  os << "subsolution = " << cfg.subsolution << "\n";
  os << "B = " << cfg.B << "\n";
  os << "psi = " << cfg.psi << "\n";
  os << "map_mx = " << list(cfg.map_mx) << "\n";
  os << "map_mp = " << list(cfg.map_mp) << "\n";
  os << "map_y0 = " << list(cfg.map_y0) << "\n\n";
  os << "[solver]\n";
  os << "tol = " << num(cfg.solver.tol) << "\n";
  os << "max_newton = " << cfg.solver.max_newton << "\n";
  os << "t_init = " << num(cfg.solver.t_init) << "\n";
  os << "t_min = " << num(cfg.solver.t_min) << "\n";
  os << "eps_ell_factor = " << num(cfg.solver.eps_ell_factor) << "\n\n";
  os << "[checks]\n";
  os << "run = " << words(cfg.checks) << "\n";
  os << "samples_x = " << cfg.samples_x << "\n";
  os << "samples_p = " << cfg.samples_p << "\n";
  os << "directions = " << cfg.directions << "\n";
  os << "p_lower = " << vec(cfg.p_lower) << "\n";
  os << "p_upper = " << vec(cfg.p_upper) << "\n";
  os << "mu0 = " << num(cfg.mu0) << "\n";
  os << "delta0 = " << num(cfg.delta0) << "\n";
  os << "phibar = " << cfg.phibar << "\n\n";
  os << "[study]\n";
  os << "h_list = " << list(cfg.h_list) << "\n";
  os << "reference = " << cfg.reference << "\n\n";
  os << "[output]\n";
  os << "dir = " << cfg.out_dir << "\n";
  os << "formats = " << (cfg.csv ? std::string("csv") + (cfg.vtk ? " vtk" : "")
                                 : std::string(cfg.vtk ? "vtk" : "")) << "\n";
  os << "trace = " << (cfg.trace ? "on" : "off") << "\n";
  return os.str();
}

ProblemBundle problem_from_config(const RunConfig& cfg) {
  ProblemBundle pb;
  Domain dom = (cfg.domain == "disc") ? Domain::disc(cfg.center, cfg.radius)
                                      : Domain::rectangle(cfg.lower, cfg.upper);
  if (cfg.domain != "disc" && cfg.domain != "rectangle")
    throw ConfigError("problem.domain must be 'rectangle' or 'disc'");

  if (!cfg.preset.empty()) {
    GoldenInstance gi = golden_instance(cfg.preset);
    pb.problem = gi.problem;
    pb.exact = gi.exact;
    pb.cost = gi.cost;
    pb.psi = gi.psi;
    return pb;
  }

  pb.problem.name = cfg.model;
  pb.problem.domain = dom;
  pb.problem.phi = parse_expression(cfg.phi);
  if (!cfg.subsolution.empty()) pb.problem.subsolution = parse_expression(cfg.subsolution);

  const ScalarFn psi_x = parse_expression(cfg.psi);
  pb.psi = [psi_x](const VectorXd& x, const VectorXd&) { return psi_x(Vec2(x[0], x[1])); };

  if (cfg.model == "custom-mapping") {
    if (cfg.map_mx.size() != 4 || cfg.map_mp.size() != 4 || cfg.map_y0.size() != 2)
      throw ConfigError("custom-mapping needs 2x2 map_mx, map_mp and a 2-vector map_y0");
    Mat2 mx, mp;
    mx << cfg.map_mx[0], cfg.map_mx[1], cfg.map_mx[2], cfg.map_mx[3];
    mp << cfg.map_mp[0], cfg.map_mp[1], cfg.map_mp[2], cfg.map_mp[3];
    const Vec2 y0(cfg.map_y0[0], cfg.map_y0[1]);
    GeneratingMap gm;
    gm.Y = [mx, mp, y0](const VectorXd& x, const VectorXd& p) -> VectorXd {
      return mx * Vec2(x[0], x[1]) + mp * Vec2(p[0], p[1]) + y0;
    };
    gm.Y_x = [mx](const VectorXd&, const VectorXd&) -> MatrixXd { return mx; };
    gm.Y_p = [mp](const VectorXd&, const VectorXd&) -> MatrixXd { return mp; };
    gm.density = pb.psi;
    ProblemSpec generated = problem_from_mapping(gm, dom, pb.problem.phi);
    generated.subsolution = pb.problem.subsolution;
    generated.name = cfg.model;
    pb.problem = std::move(generated);
    return pb;
  }

  pb.problem.A = builtin_matrix_function(cfg.model);
  pb.cost = builtin_cost(cfg.model);
  if (pb.cost) {
    pb.problem.B = scalar_b_from_cost(*pb.cost, pb.psi);
  } else {
    const ScalarFn bx = parse_expression(cfg.B);
    pb.problem.B.value = [bx](const VectorXd& x, const VectorXd&) { return bx(Vec2(x[0], x[1])); };
    pb.problem.B.grad_p = [](const VectorXd&, const VectorXd&) { return VectorXd::Zero(2); };
  }
  return pb;
}

}  // namespace mats
