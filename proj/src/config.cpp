#include "gmac/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace gmac {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    bad("value of '" + key + "' is not a number: '" + v + "'");
  }
  if (pos != v.size()) bad("trailing characters in '" + key + "': '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    bad("value of '" + key + "' is not an integer: '" + v + "'");
  }
  if (pos != v.size()) bad("trailing characters in '" + key + "': '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad("value of '" + key + "' is not a boolean: '" + v + "'");
}

std::vector<double> to_grid(const std::string& key, const std::string& v) {
  std::string tmp = v;
  std::replace(tmp.begin(), tmp.end(), ',', ' ');
  std::istringstream ss(tmp);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) out.push_back(to_double(key, tok));
  if (out.empty()) bad("'" + key + "' lists no values");
  return out;
}

StopRule parse_stop(const std::string& v) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = v.find(':', start);
    parts.push_back(v.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  const std::string& name = parts[0];
  if (name == "fixed") {
    if (parts.size() != 2) bad("stop rule 'fixed' takes one parameter: fixed:T");
    return StopRule::fixed(static_cast<int>(to_int("decode.stop", parts[1])));
  }
  if (name == "se_converged") {
    if (parts.size() < 2 || parts.size() > 3)
      bad("stop rule 'se_converged' takes se_converged:delta[:cap]");
    const double delta = to_double("decode.stop", parts[1]);
    const int cap = parts.size() == 3
                        ? static_cast<int>(to_int("decode.stop", parts[2]))
                        : 400;
    return StopRule::se_converged(delta, cap);
  }
  if (name == "se_bound") {
    if (parts.size() > 2) bad("stop rule 'se_bound' takes se_bound[:cap]");
    const int cap = parts.size() == 2
                        ? static_cast<int>(to_int("decode.stop", parts[1]))
                        : 400;
    return StopRule::se_bound(cap);
  }
  bad("unknown stop rule '" + name + "' (expected fixed, se_converged or se_bound)");
}

std::string stop_to_text(const StopRule& s) {
  std::ostringstream ss;
  ss << std::setprecision(17);
  switch (s.kind) {
    case StopRule::Kind::FixedT:
      ss << "fixed:" << s.fixed_t;
      break;
    case StopRule::Kind::SeConverged:
      ss << "se_converged:" << s.delta << ":" << s.cap;
      break;
    case StopRule::Kind::SeBound:
      ss << "se_bound:" << s.cap;
      break;
  }
  return ss.str();
}

bool is_pow2(int b) { return b >= 1 && (b & (b - 1)) == 0; }

void mark(std::vector<std::string>* keys_seen, const std::string& full) {
  if (keys_seen &&
      std::find(keys_seen->begin(), keys_seen->end(), full) == keys_seen->end())
    keys_seen->push_back(full);
}

bool seen(const std::vector<std::string>& keys, const char* full) {
  return std::find(keys.begin(), keys.end(), full) != keys.end();
}

}  // namespace

SectionPrior ExperimentConfig::prior() const {
  return prior_kind == PriorKind::Flat
             ? SectionPrior::flat(B, energy)
             : SectionPrior::binary_modulated(B, energy);
}

BaseMatrix ExperimentConfig::base() const {
  return coupled() ? BaseMatrix::build(omega, lambda, rho)
                   : BaseMatrix::trivial();
}

double ExperimentConfig::ebn0_linear() const {
  return std::pow(10.0, ebn0_db / 10.0);
}

double ExperimentConfig::sigma2() const {
  return prior().sigma2_for_ebn0(ebn0_linear());
}

std::size_t ExperimentConfig::resolved_n() const {
  const int R = lambda + omega - 1;
  if (n != 0) return n;
  const auto raw = static_cast<long long>(
      std::llround(static_cast<double>(users) / mu));
  const long long r = R;
  const long long rounded = std::max<long long>(1, (raw + r / 2) / r) * r;
  return static_cast<std::size_t>(rounded);
}

double ExperimentConfig::resolved_mu() const {
  return static_cast<double>(users) / static_cast<double>(resolved_n());
}

int ExperimentConfig::resolved_trials() const {
  if (trials > 0) return trials;
  return std::max(1, static_cast<int>(std::ceil(1e5 / users)));
}

SEParams ExperimentConfig::se_params() const {
  return SEParams{prior(), base(), resolved_mu(), sigma2()};
}

AmpOptions ExperimentConfig::amp_options() const {
  AmpOptions o;
  o.stop = stop;
  o.onsager = onsager;
  o.empirical_coeffs = empirical_coeffs;
  return o;
}

void ExperimentConfig::validate() const {
  if (!is_pow2(B)) bad("model.B must be a power of two (payload is log2 B)");
  if (!(energy > 0.0)) bad("model.energy must be positive");
  if (!std::isfinite(ebn0_db)) bad("model.ebn0_db must be finite");
  if (!(mu > 0.0)) bad("model.mu must be positive");
  if (omega < 1) bad("coupling.omega must be >= 1");
  if (lambda < 1) bad("coupling.lambda must be >= 1");
  if (omega > lambda) bad("coupling.omega must not exceed coupling.lambda");
  if (rho < 0.0 || rho >= 1.0) bad("coupling.rho must lie in [0, 1)");
  if (lambda == 1 && rho != 0.0)
    bad("coupling.rho must be 0 when lambda = 1 (no off-band blocks)");
  if (users < 1) bad("sim.users must be >= 1");
  if (coupled() && users % lambda != 0)
    bad("coupling.lambda must divide sim.users (whole column blocks)");
  const int R = lambda + omega - 1;
  if (n != 0) {
    if (n % static_cast<std::size_t>(R) != 0)
      bad("sim.n must be a multiple of the base matrix row count R");
  }
  if (trials < 0) bad("sim.trials must be >= 0 (0 selects the default)");
  if (!(target_uer > 0.0 && target_uer < 1.0))
    bad("sim.target_uer must lie in (0, 1)");
  if (trace != "none" && trace != "first" && trace != "all")
    bad("sim.trace must be one of none, first, all");
  if (sweep_mode != "grid" && sweep_mode != "bisect" &&
      sweep_mode != "omega_opt")
    bad("sweep.mode must be one of grid, bisect, omega_opt");
  for (double m : mu_grid)
    if (!(m > 0.0)) bad("sweep.mu_grid entries must be positive");
  if (omega_min < 1) bad("sweep.omega_min must be >= 1");
  if (omega_min > omega_max)
    bad("sweep.omega_min must not exceed sweep.omega_max");
  if (!(tol_db > 0.0)) bad("sweep.tol_db must be positive");
  if (stop.kind == StopRule::Kind::FixedT && stop.fixed_t < 0)
    bad("decode.stop fixed:T needs T >= 0");
  if (stop.kind == StopRule::Kind::SeConverged && !(stop.delta > 0.0))
    bad("decode.stop se_converged needs delta > 0");
  if (stop.cap < 1) bad("decode.stop cap must be >= 1");
  if (!(th_delta > 0.0)) bad("thresholds.delta must be positive");
  if (!(th_delta_tilde > 0.0)) bad("thresholds.delta_tilde must be positive");
  if (!(th_k > 0.0)) bad("thresholds.k must be positive");
  if (!(th_k1 > 0.0)) bad("thresholds.k1 must be positive");
  if (th_delta2 < 0.0) bad("thresholds.delta2 must be >= 0 (0 = midpoint)");
  if (tau_bar_eps < 0.0) bad("thresholds.tau_bar_eps must be >= 0");
  if (op_kind == OperatorKind::DenseGaussian) {
    const std::size_t elems = resolved_n() * static_cast<std::size_t>(users) *
                              static_cast<std::size_t>(B);
    if (elems > max_dense_elements)
      bad("dense operator needs " + std::to_string(elems) +
          " elements, above operator.max_dense_elements; switch kind to dct "
          "or raise the limit");
  }
}

ExperimentConfig parse_config_text(const std::string& text,
                                   std::vector<std::string>* keys_seen) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        bad("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "coupling" &&
          section != "operator" && section != "decode" && section != "sim" &&
          section != "sweep" && section != "thresholds")
        bad("unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      bad("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty()) bad("key '" + key + "' appears outside any section");
    if (key.empty()) bad("line " + std::to_string(lineno) + ": empty key");
    const std::string full = section + "." + key;
    bool known = true;
    if (section == "model") {
      if (key == "prior") {
        if (val == "flat")
          cfg.prior_kind = PriorKind::Flat;
        else if (val == "binary")
          cfg.prior_kind = PriorKind::BinaryModulated;
        else
          bad("model.prior must be flat or binary, got '" + val + "'");
      } else if (key == "B") {
        cfg.B = static_cast<int>(to_int(full, val));
      } else if (key == "energy") {
        cfg.energy = to_double(full, val);
      } else if (key == "ebn0_db") {
        cfg.ebn0_db = to_double(full, val);
      } else if (key == "mu") {
        cfg.mu = to_double(full, val);
      } else {
        known = false;
      }
    } else if (section == "coupling") {
      if (key == "omega")
        cfg.omega = static_cast<int>(to_int(full, val));
      else if (key == "lambda")
        cfg.lambda = static_cast<int>(to_int(full, val));
      else if (key == "rho")
        cfg.rho = to_double(full, val);
      else
        known = false;
    } else if (section == "operator") {
      if (key == "kind") {
        if (val == "dense")
          cfg.op_kind = OperatorKind::DenseGaussian;
        else if (val == "dct")
          cfg.op_kind = OperatorKind::StructuredDct;
        else
          bad("operator.kind must be dense or dct, got '" + val + "'");
      } else if (key == "max_dense_elements") {
        cfg.max_dense_elements =
            static_cast<std::size_t>(to_int(full, val));
      } else {
        known = false;
      }
    } else if (section == "decode") {
      if (key == "stop")
        cfg.stop = parse_stop(val);
      else if (key == "onsager")
        cfg.onsager = to_bool(full, val);
      else if (key == "empirical_coeffs")
        cfg.empirical_coeffs = to_bool(full, val);
      else
        known = false;
    } else if (section == "sim") {
      if (key == "users")
        cfg.users = static_cast<int>(to_int(full, val));
      else if (key == "n")
        cfg.n = static_cast<std::size_t>(to_int(full, val));
      else if (key == "trials")
        cfg.trials = static_cast<int>(to_int(full, val));
      else if (key == "target_uer")
        cfg.target_uer = to_double(full, val);
      else if (key == "master_seed")
        cfg.master_seed = static_cast<std::uint64_t>(to_int(full, val));
      else if (key == "trace")
        cfg.trace = val;
      else
        known = false;
    } else if (section == "sweep") {
      if (key == "mode")
        cfg.sweep_mode = val;
      else if (key == "mu_grid")
        cfg.mu_grid = to_grid(full, val);
      else if (key == "ebn0_grid")
        cfg.ebn0_grid = to_grid(full, val);
      else if (key == "omega_min")
        cfg.omega_min = static_cast<int>(to_int(full, val));
      else if (key == "omega_max")
        cfg.omega_max = static_cast<int>(to_int(full, val));
      else if (key == "tol_db")
        cfg.tol_db = to_double(full, val);
      else
        known = false;
    } else {  // thresholds
      if (key == "delta")
        cfg.th_delta = to_double(full, val);
      else if (key == "delta_tilde")
        cfg.th_delta_tilde = to_double(full, val);
      else if (key == "k")
        cfg.th_k = to_double(full, val);
      else if (key == "k1")
        cfg.th_k1 = to_double(full, val);
      else if (key == "delta2")
        cfg.th_delta2 = to_double(full, val);
      else if (key == "tau_bar_eps")
        cfg.tau_bar_eps = to_double(full, val);
      else
        known = false;
    }
    if (!known) bad("unknown key '" + key + "' in section [" + section + "]");
    mark(keys_seen, full);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path,
                             std::vector<std::string>* keys_seen) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), keys_seen);
}

void apply_preset(ExperimentConfig& cfg, const std::string& name,
                  const std::vector<std::string>& keys_seen) {
  if (name == "desk") {
    if (cfg.coupled()) {
      if (!seen(keys_seen, "sim.users")) cfg.users = 1000;
      if (!seen(keys_seen, "coupling.lambda")) cfg.lambda = 20;
    }
    return;
  }
  if (name == "paper-scale") {
    if (cfg.coupled()) {
      if (!seen(keys_seen, "sim.users")) cfg.users = 5000;
      if (!seen(keys_seen, "coupling.lambda")) cfg.lambda = 50;
      if (!seen(keys_seen, "coupling.rho")) cfg.rho = 0.0;
    } else {
      if (!seen(keys_seen, "sim.users")) cfg.users = 500;
    }
    return;
  }
  bad("unknown preset '" + name + "' (expected desk or paper-scale)");
}

std::string config_to_text(const ExperimentConfig& cfg) {
  std::ostringstream ss;
  ss << std::setprecision(17);
  ss << "[model]\n";
  ss << "prior = " << (cfg.prior_kind == PriorKind::Flat ? "flat" : "binary")
     << "\n";
  ss << "B = " << cfg.B << "\n";
  ss << "energy = " << cfg.energy << "\n";
  ss << "ebn0_db = " << cfg.ebn0_db << "\n";
  ss << "mu = " << cfg.mu << "\n\n";
  ss << "[coupling]\n";
  ss << "omega = " << cfg.omega << "\n";
  ss << "lambda = " << cfg.lambda << "\n";
  ss << "rho = " << cfg.rho << "\n\n";
  ss << "[operator]\n";
  ss << "kind = "
     << (cfg.op_kind == OperatorKind::DenseGaussian ? "dense" : "dct") << "\n";
  ss << "max_dense_elements = " << cfg.max_dense_elements << "\n\n";
  ss << "[decode]\n";
  ss << "stop = " << stop_to_text(cfg.stop) << "\n";
  ss << "onsager = " << (cfg.onsager ? "true" : "false") << "\n";
  ss << "empirical_coeffs = " << (cfg.empirical_coeffs ? "true" : "false")
     << "\n\n";
  ss << "[sim]\n";
  ss << "users = " << cfg.users << "\n";
  ss << "n = " << cfg.n << "\n";
  ss << "trials = " << cfg.trials << "\n";
  ss << "target_uer = " << cfg.target_uer << "\n";
  ss << "master_seed = " << cfg.master_seed << "\n";
  ss << "trace = " << cfg.trace << "\n\n";
  ss << "[sweep]\n";
  ss << "mode = " << cfg.sweep_mode << "\n";
  if (!cfg.mu_grid.empty()) {
    ss << "mu_grid =";
    for (double m : cfg.mu_grid) ss << " " << m;
    ss << "\n";
  }
  if (!cfg.ebn0_grid.empty()) {
    ss << "ebn0_grid =";
    for (double e : cfg.ebn0_grid) ss << " " << e;
    ss << "\n";
  }
  ss << "omega_min = " << cfg.omega_min << "\n";
  ss << "omega_max = " << cfg.omega_max << "\n";
  ss << "tol_db = " << cfg.tol_db << "\n\n";
  ss << "[thresholds]\n";
  ss << "delta = " << cfg.th_delta << "\n";
  ss << "delta_tilde = " << cfg.th_delta_tilde << "\n";
  ss << "k = " << cfg.th_k << "\n";
  ss << "k1 = " << cfg.th_k1 << "\n";
  ss << "delta2 = " << cfg.th_delta2 << "\n";
  ss << "tau_bar_eps = " << cfg.tau_bar_eps << "\n";
  return ss.str();
}

}  // namespace gmac
