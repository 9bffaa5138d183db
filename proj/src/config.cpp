#include "blab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "blab/initial_data.hpp"
#include "blab/operators.hpp"

namespace blab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(trim(item));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

double to_double(const std::string& s) {
  double x = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty())
    throw Error("'" + s + "' is not a number");
  return x;
}

long long to_int(const std::string& s) {
  long long x = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty())
    throw Error("'" + s + "' is not an integer");
  return x;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw Error("'" + s + "' is not a boolean (true/false)");
}

void one_of(const std::string& v, std::initializer_list<const char*> opts) {
  std::string all;
  for (const char* o : opts) {
    if (v == o) return;
    all += all.empty() ? o : std::string(", ") + o;
  }
  throw Error("'" + v + "' is not one of " + all);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"grid.N", [](ExperimentConfig& c, const std::string& v) { c.N = static_cast<int>(to_int(v)); }},
      {"grid.L", [](ExperimentConfig& c, const std::string& v) { c.L = to_double(v); }},
      {"grid.dealias", [](ExperimentConfig& c, const std::string& v) { c.dealias = to_double(v); }},
      {"schedule.eps",
       [](ExperimentConfig& c, const std::string& v) {
         c.eps.clear();
         for (const auto& x : split_list(v)) c.eps.push_back(to_double(x));
       }},
      {"schedule.sigma", [](ExperimentConfig& c, const std::string& v) { c.sigma = to_double(v); }},
      {"schedule.mu", [](ExperimentConfig& c, const std::string& v) { c.mu = to_double(v); }},
      {"schedule.s", [](ExperimentConfig& c, const std::string& v) { c.s = to_double(v); }},
      {"schedule.kappa", [](ExperimentConfig& c, const std::string& v) { c.kappa = to_double(v); }},
      {"forcing.kind",
       [](ExperimentConfig& c, const std::string& v) {
         one_of(v, {"none", "shear", "random"});
         c.forcing = v;
       }},
      {"forcing.amplitude", [](ExperimentConfig& c, const std::string& v) { c.forcing_amplitude = to_double(v); }},
      {"forcing.seed",
       [](ExperimentConfig& c, const std::string& v) { c.forcing_seed = static_cast<std::uint64_t>(to_int(v)); }},
      {"forcing.decay", [](ExperimentConfig& c, const std::string& v) { c.forcing_decay = to_double(v); }},
      {"experiment.kind",
       [](ExperimentConfig& c, const std::string& v) {
         one_of(v, {"residual-decay", "balance-error", "oracle-suite"});
         c.kind = v;
       }},
      {"experiment.initial",
       [](ExperimentConfig& c, const std::string& v) {
         one_of(v, {"zonal", "dipole", "random-gevrey"});
         c.initial = v;
       }},
      {"experiment.amplitude", [](ExperimentConfig& c, const std::string& v) { c.amplitude = to_double(v); }},
      {"experiment.seed",
       [](ExperimentConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int(v)); }},
      {"experiment.decay", [](ExperimentConfig& c, const std::string& v) { c.decay = to_double(v); }},
      {"experiment.n",
       [](ExperimentConfig& c, const std::string& v) {
         c.n.clear();
         for (const auto& x : split_list(v)) c.n.push_back(static_cast<int>(to_int(x)));
         if (c.n.empty()) throw Error("empty level list");
       }},
      {"experiment.mode",
       [](ExperimentConfig& c, const std::string& v) {
         one_of(v, {"automatic", "numeric", "formal"});
         c.mode = v;
       }},
      {"experiment.dual", [](ExperimentConfig& c, const std::string& v) { c.dual = to_bool(v); }},
      {"experiment.t_end", [](ExperimentConfig& c, const std::string& v) { c.t_end = to_double(v); }},
      {"experiment.samples",
       [](ExperimentConfig& c, const std::string& v) { c.samples = static_cast<int>(to_int(v)); }},
      {"experiment.dt_pe", [](ExperimentConfig& c, const std::string& v) { c.dt_pe = to_double(v); }},
      {"experiment.dt_qg", [](ExperimentConfig& c, const std::string& v) { c.dt_qg = to_double(v); }},
      {"experiment.quick", [](ExperimentConfig& c, const std::string& v) { c.quick = to_bool(v); }},
      {"experiment.assertions", [](ExperimentConfig& c, const std::string& v) { c.assertions = to_bool(v); }},
      {"experiment.checkpoints", [](ExperimentConfig& c, const std::string& v) { c.checkpoints = to_bool(v); }},
  };
  return m;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // shortest form that reads back exactly
  for (int p = 1; p <= 17; ++p) {
    char b[64];
    std::snprintf(b, sizeof b, "%.*g", p, x);
    if (std::strtod(b, nullptr) == x) return b;
  }
  return buf;
}

int band_K(double kappa) { return static_cast<int>(std::ceil(kappa)) - 1; }

}  // namespace

Grid ExperimentConfig::grid() const {
  Grid g = Grid::cube(N, dealias);
  if (L > 0) g.L = {L, L, L};
  g.validate();
  return g;
}

Schedule ExperimentConfig::schedule(double e) const {
  Schedule sch = make_schedule(e, sigma, mu, s);
  if (kappa) sch = with_kappa(sch, *kappa);
  return sch;
}

ForcingSet ExperimentConfig::forcing_set(const Grid& g) const {
  if (forcing == "none") return zero_forcing(g);
  if (forcing == "shear") {
    // f_u = A cos(2 pi z / L3)
    SpectralField fu(g, Parity::even);
    fu.at(IVec3{0, 0, 1}) += 0.5 * forcing_amplitude;
    fu.at(IVec3{0, 0, -1}) += 0.5 * forcing_amplitude;
    return derive_forcings(fu, SpectralField(g, Parity::even), SpectralField(g, Parity::odd));
  }
  const std::uint64_t s0 = forcing_seed * 3;
  return derive_forcings(random_field(g, s0 + 1, Parity::even, forcing_decay, forcing_amplitude),
                         random_field(g, s0 + 2, Parity::even, forcing_decay, forcing_amplitude),
                         random_field(g, s0 + 3, Parity::odd, forcing_decay, forcing_amplitude));
}

SpectralField ExperimentConfig::initial_q(const Grid& g) const {
  return blab::dealias(slow_initial_data(initial, g, amplitude, seed, decay));
}

std::vector<int> ExperimentConfig::levels(const Schedule& sch) const {
  if (n.empty()) return {sch.n_star};
  return n;
}

bool ExperimentConfig::is_explicit(const std::string& key) const {
  return std::find(explicit_keys.begin(), explicit_keys.end(), key) != explicit_keys.end();
}

void validate_config(const ExperimentConfig& c) {
  if (c.N < 4 || c.N % 2 != 0) throw Error("grid.N=" + std::to_string(c.N) + " must be even and >= 4");
  if (c.L < 0) throw Error("grid.L must be positive (0 selects 2 pi)");
  if (!(c.dealias > 0 && c.dealias <= 1)) throw Error("grid.dealias must lie in (0,1]");
  if (c.kind != "oracle-suite" && c.eps.empty()) throw Error("schedule.eps: empty sweep");
  if (!(c.sigma > 0 && c.sigma < 1)) throw Error("schedule.sigma=" + num(c.sigma) + " must lie in (0,1)");
  if (!(c.mu > 0)) throw Error("schedule.mu must be positive");
  if (c.kappa && !(*c.kappa > 0)) throw Error("schedule.kappa must be positive");
  if (!(c.amplitude >= 0)) throw Error("experiment.amplitude must be >= 0");
  if (!(c.t_end > 0)) throw Error("experiment.t_end must be positive");
  if (c.samples < 1) throw Error("experiment.samples must be >= 1");
  if (c.dt_pe < 0 || !(c.dt_qg > 0)) throw Error("experiment: time steps must be positive");
  const Grid g = c.grid();
  const int kmax = std::min({g.dealias_max(0), g.dealias_max(1), g.dealias_max(2)});
  for (double e : c.eps) {
    if (!(e > 0 && e <= 1)) throw Error("schedule.eps=" + num(e) + " must lie in (0,1]");
    const Schedule sch = c.schedule(e);
    for (int n : c.n) {
      if (n < 0) throw Error("experiment.n=" + std::to_string(n) + " must be >= 0");
      if (n > sch.n_star)
        throw Error("experiment.n=" + std::to_string(n) + " exceeds n*=" + std::to_string(sch.n_star) +
                    " at eps=" + num(e) + "; the hierarchy is only meaningful for n <= n*");
    }
    if (c.kind != "oracle-suite" && band_K(sch.kappa) > kmax)
      throw Error("kappa=" + num(sch.kappa) + " at eps=" + num(e) + " needs the dealiased grid to hold |k|=" +
                  std::to_string(band_K(sch.kappa)) + " but N=" + std::to_string(c.N) + " reaches " +
                  std::to_string(kmax));
  }
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig c;
  std::map<std::string, int> seen;
  std::string section;
  std::istringstream in(text);
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw Error(source + ":" + std::to_string(lineno) + ": " + msg); };
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = raw;
    if (const auto h = line.find_first_of("#;"); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "grid" && section != "schedule" && section != "forcing" && section != "experiment")
        fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    if (section.empty()) fail("key outside a section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) fail("unknown key '" + trim(line.substr(0, eq)) + "' in [" + section + "]");
    if (const auto d = seen.find(key); d != seen.end())
      fail("duplicate key '" + key + "' (first set on line " + std::to_string(d->second) + ")");
    seen[key] = lineno;
    try {
      it->second(c, value);
    } catch (const Error& e) {
      fail(key + ": " + e.what());
    }
    c.explicit_keys.push_back(key);
  }
  try {
    validate_config(c);
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream o;
  auto list = [](const auto& v) {
    std::string s;
    for (const auto& x : v) {
      if (!s.empty()) s += ", ";
      if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>)
        s += num(x);
      else
        s += std::to_string(x);
    }
    return s;
  };
  auto b = [](bool x) { return x ? "true" : "false"; };
  if (!c.explicit_keys.empty()) {
    o << "# set explicitly:";
    for (const auto& k : c.explicit_keys) o << ' ' << k;
    o << '\n';
  }
  o << "\n[grid]\nN = " << c.N << "\nL = " << num(c.L) << "\ndealias = " << num(c.dealias) << '\n';
  o << "\n[schedule]\neps = " << list(c.eps) << "\nsigma = " << num(c.sigma) << "\nmu = " << num(c.mu)
    << "\ns = " << num(c.s) << '\n';
  if (c.kappa) o << "kappa = " << num(*c.kappa) << "  # override\n";
  for (double e : c.eps) {
    const Schedule d = make_schedule(e, c.sigma, c.mu, c.s);
    o << "# eps=" << num(e) << ": kappa=" << num(d.kappa) << " delta=" << num(d.delta) << " eta=" << num(d.eta)
      << " n*=" << d.n_star;
    if (c.kappa) o << " (kappa overridden to " << num(*c.kappa) << ")";
    o << '\n';
  }
  o << "\n[forcing]\nkind = " << c.forcing << "\namplitude = " << num(c.forcing_amplitude)
    << "\nseed = " << c.forcing_seed << "\ndecay = " << num(c.forcing_decay) << '\n';
  o << "\n[experiment]\nkind = " << c.kind << "\ninitial = " << c.initial << "\namplitude = " << num(c.amplitude)
    << "\nseed = " << c.seed << "\ndecay = " << num(c.decay) << '\n';
  if (!c.n.empty())
    o << "n = " << list(c.n) << '\n';
  else
    o << "# n defaults to n* of each eps\n";
  o << "mode = " << c.mode << "\ndual = " << b(c.dual) << "\nt_end = " << num(c.t_end) << "\nsamples = " << c.samples
    << "\ndt_pe = " << num(c.dt_pe) << "\ndt_qg = " << num(c.dt_qg) << "\nquick = " << b(c.quick)
    << "\nassertions = " << b(c.assertions) << "\ncheckpoints = " << b(c.checkpoints) << '\n';
  return o.str();
}

}  // namespace blab
