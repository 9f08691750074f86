// Copyright 2026 The qcut authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch front door: parses experiment files, dispatches the estimators, and
// writes one result row per run. Exit codes: 0 success, 1 config error,
// 2 numerical failure, 3 sampler retry cap exhausted.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcut/decomposition.hpp"
#include "qcut/errors.hpp"
#include "qcut/hamsim.hpp"
#include "qcut/rng.hpp"
#include "qcut/spacecut.hpp"
#include "qcut/statevector.hpp"
#include "qcut/timecut.hpp"
#include "qcut/verify.hpp"

namespace {

using namespace qcut;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct KvEntry {
  std::string value;
  int line = 0;
};

// Flat key=value experiment file; '#' starts a comment.
std::map<std::string, KvEntry> parse_kv(const std::string& text) {
  std::map<std::string, KvEntry> out;
  std::istringstream in(text);
  std::string line;
  int num = 0;
  while (std::getline(in, line)) {
    ++num;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const std::size_t b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const std::size_t e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(num) + ": expected key=value");
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(num) + ": empty key");
    if (out.count(key))
      throw ConfigError("line " + std::to_string(num) + ": duplicate key '" + key + "'");
    out[key] = {val, num};
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + what + ": '" + s + "'");
  }
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return std::size_t(v);
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + what + ": '" + s + "'");
  }
}

std::vector<std::size_t> parse_wire_list(const std::string& s, const std::string& what) {
  std::vector<std::size_t> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_size(item, what));
  }
  if (out.empty()) throw ConfigError(what + " is empty");
  return out;
}

ComplexMatrix rotation_2x2(const ComplexMatrix& pauli, double theta) {
  ComplexMatrix out = ComplexMatrix::identity(2) * Complex(std::cos(theta), 0.0);
  out += pauli * Complex(0.0, -std::sin(theta));
  return out;
}

// Gate-list circuit format: one gate per line, `GATE wire(s) [angle]`.
// Accepted mnemonics: H S SDG T X Y Z, RX RY RZ (wire, angle),
// CX (control, target), CZ, SWAP, ZZ (two wires, angle).
Circuit parse_gate_list(const std::string& text) {
  Circuit circuit;
  std::istringstream in(text);
  std::string line;
  int num = 0;
  const auto fail = [&num](const std::string& msg) {
    throw ConfigError("line " + std::to_string(num) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++num;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream toks(line);
    std::string name;
    if (!(toks >> name)) continue;
    for (char& c : name) c = char(std::toupper(static_cast<unsigned char>(c)));
    const auto wire = [&]() -> std::size_t {
      long long w = -1;
      if (!(toks >> w) || w < 0) fail("expected a wire index after " + name);
      return std::size_t(w);
    };
    const auto angle = [&]() -> double {
      double a = 0.0;
      if (!(toks >> a)) fail("expected an angle after " + name);
      return a;
    };
    if (name == "H") {
      circuit.push_back({hadamard(), {wire()}, std::nullopt, "h"});
    } else if (name == "S") {
      circuit.push_back({phase_s(), {wire()}, std::nullopt, "s"});
    } else if (name == "SDG") {
      circuit.push_back({phase_s().adjoint(), {wire()}, std::nullopt, "sdg"});
    } else if (name == "T") {
      ComplexMatrix t = ComplexMatrix::identity(2);
      t(1, 1) = Complex(std::cos(M_PI / 4.0), std::sin(M_PI / 4.0));
      circuit.push_back({t, {wire()}, std::nullopt, "t"});
    } else if (name == "X" || name == "Y" || name == "Z") {
      const ComplexMatrix& m = name == "X" ? pauli_x() : name == "Y" ? pauli_y() : pauli_z();
      circuit.push_back({m, {wire()}, std::nullopt, std::string(1, char(std::tolower(name[0])))});
    } else if (name == "RX" || name == "RY" || name == "RZ") {
      const ComplexMatrix& m = name == "RX" ? pauli_x() : name == "RY" ? pauli_y() : pauli_z();
      const std::size_t w = wire();
      circuit.push_back({rotation_2x2(m, angle()), {w}, std::nullopt,
                         std::string(1, 'r') + char(std::tolower(name[1]))});
    } else if (name == "CX" || name == "CNOT") {
      const std::size_t c = wire(), t = wire();
      circuit.push_back({pauli_x(), {t}, c, "cx"});
    } else if (name == "CZ") {
      const std::size_t a = wire(), b = wire();
      circuit.push_back({pauli_z(), {b}, a, "cz"});
    } else if (name == "SWAP") {
      const std::size_t a = wire(), b = wire();
      circuit.push_back({swap_matrix(), {a, b}, std::nullopt, "swap"});
    } else if (name == "ZZ") {
      const std::size_t a = wire(), b = wire();
      circuit.push_back({zz_matrix(angle()), {a, b}, std::nullopt, "zz"});
    } else {
      fail("unknown gate '" + name + "'");
    }
    std::string extra;
    if (toks >> extra) fail("trailing token '" + extra + "'");
  }
  return circuit;
}

// Same line grammar as the dumped circuits: name (spaces replaced by '_'),
// target wires, then the control wire if any.
void print_circuit(std::ostream& out, const Circuit& circuit) {
  for (const GateOp& g : circuit) {
    std::string name = g.name.empty() ? std::string("u") : g.name;
    for (char& c : name)
      if (c == ' ') c = '_';
    out << name;
    for (std::size_t w : g.targets) out << ' ' << w;
    if (g.control) out << " ctrl=" << *g.control;
    out << '\n';
  }
}

struct NamedUnitary {
  ComplexMatrix u;
  BipartiteShape shape;
};

// cnot | cx | swap | cz | zz(<theta radians>)
std::optional<NamedUnitary> named_gate(std::string spec) {
  for (char& c : spec) c = char(std::tolower(static_cast<unsigned char>(c)));
  if (spec == "cnot" || spec == "cx") return NamedUnitary{cnot_matrix(), {2, 2}};
  if (spec == "swap") return NamedUnitary{swap_matrix(), {2, 2}};
  if (spec == "cz") return NamedUnitary{cz_matrix(), {2, 2}};
  if (spec.rfind("zz(", 0) == 0 && spec.back() == ')') {
    const double theta =
        parse_double(spec.substr(3, spec.size() - 4), "zz angle");
    return NamedUnitary{zz_matrix(theta), {2, 2}};
  }
  return std::nullopt;
}

// Dense unitary of a gate-list circuit regrouped to the A-major bipartite
// index (i_A * d_B + i_B) with side A on wires [0, wires_a).
NamedUnitary bipartite_from_circuit(const Circuit& circuit, std::size_t wires_a,
                                    std::size_t n_qubits) {
  if (wires_a == 0 || wires_a >= n_qubits)
    throw ConfigError("wires_a must split the register into two nonempty sides");
  const ComplexMatrix dense = dense_circuit_unitary(circuit, n_qubits);
  const std::size_t da = std::size_t(1) << wires_a;
  const std::size_t db = std::size_t(1) << (n_qubits - wires_a);
  ComplexMatrix out = ComplexMatrix::zero(da * db, da * db);
  const auto regroup = [&](std::size_t state) {
    const std::size_t ia = state & (da - 1);
    const std::size_t ib = state >> wires_a;
    return ia * db + ib;
  };
  for (std::size_t r = 0; r < da * db; ++r)
    for (std::size_t c = 0; c < da * db; ++c) out(regroup(r), regroup(c)) = dense(r, c);
  return {out, {da, db}};
}

NamedUnitary unitary_from_kv(const std::map<std::string, KvEntry>& kv) {
  if (auto it = kv.find("gate"); it != kv.end()) {
    auto named = named_gate(it->second.value);
    if (!named)
      throw ConfigError("line " + std::to_string(it->second.line) + ": unknown gate '" +
                        it->second.value + "' (expected cnot, cx, swap, cz, or zz(theta))");
    return *named;
  }
  if (auto it = kv.find("circuit"); it != kv.end()) {
    const auto wa = kv.find("wires_a");
    const auto nq = kv.find("qubits");
    if (wa == kv.end() || nq == kv.end())
      throw ConfigError("circuit= needs qubits= and wires_a=");
    return bipartite_from_circuit(parse_gate_list(read_file(it->second.value)),
                                  parse_size(wa->second.value, "wires_a"),
                                  parse_size(nq->second.value, "qubits"));
  }
  throw ConfigError("config needs gate= or circuit=");
}

// `[coeff] LETTER@wire ...` with the same token grammar as Hamiltonian terms.
Observable parse_observable_spec(const std::string& spec, std::size_t n_qubits) {
  std::istringstream in(spec);
  std::string tok;
  double coefficient = 1.0;
  std::string letters;
  std::vector<std::size_t> targets;
  bool first = true;
  while (in >> tok) {
    if (first && tok.find('@') == std::string::npos) {
      coefficient = parse_double(tok, "observable coefficient");
      first = false;
      continue;
    }
    first = false;
    const std::size_t at = tok.find('@');
    if (at != 1 || tok.size() < 3)
      throw ConfigError("bad observable factor '" + tok + "' (expected LETTER@wire)");
    const char letter = char(std::toupper(static_cast<unsigned char>(tok[0])));
    if (letter != 'X' && letter != 'Y' && letter != 'Z')
      throw ConfigError("bad observable letter in '" + tok + "'");
    const std::size_t w = parse_size(tok.substr(2), "observable wire");
    if (w >= n_qubits) throw ConfigError("observable wire " + std::to_string(w) + " out of range");
    for (std::size_t t : targets)
      if (t == w) throw ConfigError("observable repeats wire " + std::to_string(w));
    letters.push_back(letter);
    targets.push_back(w);
  }
  if (targets.empty()) throw ConfigError("observable spec '" + spec + "' has no factors");
  if (std::abs(coefficient) > 1.0 + 1e-12)
    throw ConfigError("observable norm exceeds 1 (|coefficient| > 1)");
  return Observable::pauli(letters, targets, coefficient);
}

// Result sink: one row, CSV or JSON, to --out or stdout.
struct Row {
  std::vector<std::pair<std::string, std::string>> cells;
  void num(const std::string& key, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    cells.emplace_back(key, buf);
  }
  void integer(const std::string& key, std::size_t v) {
    cells.emplace_back(key, std::to_string(v));
  }
  void text(const std::string& key, const std::string& v) { cells.emplace_back(key, v); }
};

void write_row(const Row& row, const std::string& out_path, const std::string& format) {
  std::ostringstream body;
  if (format == "json") {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : row.cells) {
      if (v == "true" || v == "false") {
        j[k] = (v == "true");
      } else if (!v.empty() && v.find_first_not_of("0123456789") == std::string::npos) {
        j[k] = std::stoull(v);
      } else {
        try {
          std::size_t used = 0;
          const double d = std::stod(v, &used);
          if (used == v.size())
            j[k] = d;
          else
            j[k] = v;
        } catch (const std::exception&) {
          j[k] = v;
        }
      }
    }
    body << j.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < row.cells.size(); ++i)
      body << row.cells[i].first << (i + 1 < row.cells.size() ? "," : "\n");
    for (std::size_t i = 0; i < row.cells.size(); ++i)
      body << row.cells[i].second << (i + 1 < row.cells.size() ? "," : "\n");
  }
  if (out_path.empty()) {
    std::cout << body.str();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + out_path);
  out << body.str();
}

struct GlobalArgs {
  std::uint64_t seed = 0;
  std::size_t trials = 10000;
  std::string out_path;
  std::string format = "csv";
  bool dump_circuits = false;
  std::size_t threads = 0;  // 0 = available parallelism

  std::size_t effective_threads() const {
    if (threads) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
  }
};

// Per-key CLI override: config supplies defaults, explicit flags win.
template <typename T, typename Parse>
void override_from_kv(const std::map<std::string, KvEntry>& kv, const std::string& key, T& slot,
                      bool flag_given, Parse parse) {
  const auto it = kv.find(key);
  if (it == kv.end() || flag_given) return;
  slot = parse(it->second.value);
}

std::function<void(const DoubleHadamardCircuit&)> make_dump_sink(bool enabled) {
  if (!enabled) return {};
  return [](const DoubleHadamardCircuit& c) {
    std::cout << "# setting i=" << c.setting.i << " j=" << c.setting.j << " g=" << c.setting.g
              << " (na=" << c.layout.na << " nb=" << c.layout.nb << ")\n";
    print_circuit(std::cout, c.gates);
  };
}

int run_extent(const std::string& config_path, const std::string& gate_spec,
               const GlobalArgs& g) {
  NamedUnitary nu;
  if (!gate_spec.empty()) {
    auto named = named_gate(gate_spec);
    if (!named)
      throw ConfigError("unknown gate '" + gate_spec +
                        "' (expected cnot, cx, swap, cz, or zz(theta))");
    nu = *named;
  } else if (!config_path.empty()) {
    nu = unitary_from_kv(parse_kv(read_file(config_path)));
  } else {
    throw ConfigError("extent needs --gate or a config file");
  }
  const ExtentResult ext = product_extent_schmidt(nu.u, nu.shape);
  const double rc = choi_robustness(nu.u, nu.shape);
  char line[128];
  std::snprintf(line, sizeof line, "xi=%.10g Rc=%.10g certified=%s\n", ext.value, rc,
                ext.certified ? "true" : "false");
  std::cout << line;
  if (!g.out_path.empty()) {
    Row row;
    row.num("xi", ext.value);
    row.num("rc", rc);
    row.text("certified", ext.certified ? "true" : "false");
    write_row(row, g.out_path, g.format);
  }
  return 0;
}

int run_spacecut(const std::string& config_path, const GlobalArgs& g, bool trials_given,
                 bool seed_given) {
  const auto kv = parse_kv(read_file(config_path));
  const NamedUnitary nu = unitary_from_kv(kv);

  LocalDecomposition gamma;
  std::string route = "pauli";
  if (auto it = kv.find("decomposition"); it != kv.end()) route = it->second.value;
  if (route == "pauli") {
    gamma = pauli_decomposition(nu.u, nu.shape);
  } else if (route == "schmidt") {
    const ExtentResult ext = product_extent_schmidt(nu.u, nu.shape);
    if (!ext.certificate)
      throw NumericalError("no Schmidt-form decomposition certificate for this gate");
    gamma = *ext.certificate;
  } else {
    throw ConfigError("decomposition must be 'pauli' or 'schmidt'");
  }

  Circuit prep;
  if (auto it = kv.find("prep"); it != kv.end()) prep = parse_gate_list(read_file(it->second.value));
  std::size_t n = 0;
  while ((std::size_t(1) << n) < nu.shape.total()) ++n;
  const Observable x = parse_observable_spec(
      kv.count("observable") ? kv.at("observable").value : "Z@0", n);

  std::uint64_t seed = g.seed;
  std::size_t trials = g.trials;
  override_from_kv(kv, "seed", seed, seed_given,
                   [](const std::string& s) { return parse_size(s, "seed"); });
  override_from_kv(kv, "trials", trials, trials_given,
                   [](const std::string& s) { return parse_size(s, "trials"); });

  EstimateOptions opt;
  opt.threads = g.effective_threads();
  if (auto it = kv.find("conditional_mean"); it != kv.end())
    opt.conditional_mean = it->second.value == "true";
  opt.dump_sink = make_dump_sink(g.dump_circuits);

  RngStream rng(seed);
  const CutEstimate est = estimate(gamma, nu.shape, prep, x, trials, rng, opt);
  Row row;
  row.num("mean", est.mean);
  row.num("variance", est.empirical_variance);
  row.integer("trials", est.trials);
  row.num("one_norm", est.one_norm);
  row.integer("seed", seed);
  write_row(row, g.out_path, g.format);
  return 0;
}

struct HamsimArgs {
  double t = 1.0;
  double eps = 0.05;
  std::size_t r = 0;
  std::size_t retry_cap = 64;
  std::string observable = "Z@0";
  std::string prep_path;
  bool conditional_mean = false;
};

int run_hamsim(const std::string& path, HamsimArgs a, const GlobalArgs& g,
               const std::map<std::string, bool>& given) {
  std::string ham_text = read_file(path);
  std::uint64_t seed = g.seed;
  std::size_t trials = g.trials;

  // The positional is either a Hamiltonian file or a key=value experiment
  // file with hamiltonian=<path>; the first non-comment line decides.
  {
    std::istringstream in(ham_text);
    std::string line;
    bool kv_style = false;
    while (std::getline(in, line)) {
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::size_t b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      kv_style = line.find('=') != std::string::npos;
      break;
    }
    if (kv_style) {
      const auto kv = parse_kv(ham_text);
      const auto hp = kv.find("hamiltonian");
      if (hp == kv.end()) throw ConfigError("experiment file needs hamiltonian=<path>");
      ham_text = read_file(hp->second.value);
      const auto dbl = [](const std::string& s) { return parse_double(s, "config value"); };
      const auto sz = [](const std::string& s) { return parse_size(s, "config value"); };
      const auto str = [](const std::string& s) { return s; };
      override_from_kv(kv, "t", a.t, given.at("t"), dbl);
      override_from_kv(kv, "eps", a.eps, given.at("eps"), dbl);
      override_from_kv(kv, "r", a.r, given.at("r"), sz);
      override_from_kv(kv, "retry_cap", a.retry_cap, given.at("retry_cap"), sz);
      override_from_kv(kv, "observable", a.observable, given.at("observable"), str);
      override_from_kv(kv, "prep", a.prep_path, given.at("prep"), str);
      override_from_kv(kv, "seed", seed, given.at("seed"), sz);
      override_from_kv(kv, "trials", trials, given.at("trials"), sz);
      if (auto it = kv.find("conditional_mean"); it != kv.end() && !given.at("conditional_mean"))
        a.conditional_mean = it->second.value == "true";
    }
  }

  const ParsedHamiltonian parsed = parse_hamiltonian(ham_text);
  Partition part;
  part.a = parsed.cluster_a;
  std::vector<bool> in_a(parsed.n_qubits, false);
  for (std::size_t w : part.a) in_a[w] = true;
  for (std::size_t w = 0; w < parsed.n_qubits; ++w)
    if (!in_a[w]) part.b.push_back(w);
  const ClusteredHamiltonian ham = classify(parsed.terms, parsed.n_qubits, part);

  Circuit prep;
  if (!a.prep_path.empty()) prep = parse_gate_list(read_file(a.prep_path));
  const Observable x = parse_observable_spec(a.observable, parsed.n_qubits);

  HamsimOptions opt;
  opt.r_override = a.r;
  opt.retry_cap = a.retry_cap;
  opt.threads = g.effective_threads();
  opt.conditional_mean = a.conditional_mean;
  opt.dump_sink = make_dump_sink(g.dump_circuits);

  RngStream rng(seed);
  const HamsimEstimate est =
      hamsim_estimate(ham, prep, x, a.t, a.eps, trials, rng, opt);
  Row row;
  row.num("mean", est.est.mean);
  row.num("variance", est.est.empirical_variance);
  row.integer("trials", est.est.trials);
  row.num("phi", est.est.one_norm);
  row.num("eta", est.eta);
  row.integer("r", est.r);
  row.num("t", a.t);
  row.num("epsilon", a.eps);
  row.integer("seed", seed);
  write_row(row, g.out_path, g.format);
  return 0;
}

struct TimecutArgs {
  std::string cut_wires = "0";
  std::string observable = "Z@0";
  std::string mode = "sampled";
  std::size_t qubits = 0;
  std::string prep_path;
};

int run_timecut(const std::string& config_path, TimecutArgs a, const GlobalArgs& g,
                const std::map<std::string, bool>& given) {
  std::uint64_t seed = g.seed;
  std::size_t trials = g.trials;
  if (!config_path.empty()) {
    const auto kv = parse_kv(read_file(config_path));
    const auto sz = [](const std::string& s) { return parse_size(s, "config value"); };
    const auto str = [](const std::string& s) { return s; };
    override_from_kv(kv, "cut_wires", a.cut_wires, given.at("cut_wires"), str);
    override_from_kv(kv, "observable", a.observable, given.at("observable"), str);
    override_from_kv(kv, "mode", a.mode, given.at("mode"), str);
    override_from_kv(kv, "qubits", a.qubits, given.at("qubits"), sz);
    override_from_kv(kv, "prep", a.prep_path, given.at("prep"), str);
    override_from_kv(kv, "seed", seed, given.at("seed"), sz);
    override_from_kv(kv, "trials", trials, given.at("trials"), sz);
  }
  if (a.mode != "sampled" && a.mode != "analytic")
    throw ConfigError("mode must be 'sampled' or 'analytic'");

  const std::vector<std::size_t> cut = parse_wire_list(a.cut_wires, "cut_wires");
  Circuit prep;
  if (!a.prep_path.empty()) prep = parse_gate_list(read_file(a.prep_path));
  std::size_t n = a.qubits;
  if (n == 0) {
    for (const GateOp& gate : prep) {
      for (std::size_t w : gate.targets) n = std::max(n, w + 1);
      if (gate.control) n = std::max(n, *gate.control + 1);
    }
    for (std::size_t w : cut) n = std::max(n, w + 1);
    if (n == 0) n = 1;
  }
  const Observable x = parse_observable_spec(a.observable, n);
  const std::size_t da = std::size_t(1) << cut.size();

  // Variance envelope needs X regrouped so the cut register is the A block.
  const double bound = [&] {
    const ComplexMatrix dense = dense_observable(x, n);
    std::vector<std::size_t> rest;
    std::vector<bool> is_cut(n, false);
    for (std::size_t w : cut) is_cut[w] = true;
    for (std::size_t w = 0; w < n; ++w)
      if (!is_cut[w]) rest.push_back(w);
    const std::size_t db = std::size_t(1) << rest.size();
    const auto regroup = [&](std::size_t state) {
      std::size_t ia = 0, ib = 0;
      for (std::size_t m = 0; m < cut.size(); ++m) ia |= ((state >> cut[m]) & 1ULL) << m;
      for (std::size_t m = 0; m < rest.size(); ++m) ib |= ((state >> rest[m]) & 1ULL) << m;
      return ia * db + ib;
    };
    ComplexMatrix xa = ComplexMatrix::zero(da * db, da * db);
    for (std::size_t r = 0; r < da * db; ++r)
      for (std::size_t c = 0; c < da * db; ++c) xa(regroup(r), regroup(c)) = dense(r, c);
    return variance_bound_check(xa, {da, db});
  }();

  Row row;
  if (a.mode == "analytic") {
    row.num("mean", dense_expectation(prep, x, n));
    row.num("variance", 0.0);
    row.integer("trials", 0);
    row.num("one_norm", 2.0 * double(da) - 1.0);
    row.integer("dA", da);
    row.num("bound", bound);
  } else {
    TimecutOptions opt;
    opt.threads = g.effective_threads();
    RngStream rng(seed);
    const TimecutEstimate est = timecut_estimate(prep, n, cut, x, trials, rng, opt);
    row.num("mean", est.mean);
    row.num("variance", est.empirical_variance);
    row.integer("trials", est.trials);
    row.num("one_norm", est.one_norm);
    row.integer("dA", est.dim_a);
    row.num("bound", bound);
  }
  write_row(row, g.out_path, g.format);
  return 0;
}

int run_verify(const GlobalArgs& g) {
  const std::vector<OracleReport> reports = run_audit_suite(g.seed);
  for (const OracleReport& r : reports) {
    char buf[192];
    std::snprintf(buf, sizeof buf, "%s %-42s computed=%.10g oracle=%.10g tol=%.3g\n",
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), r.computed, r.oracle, r.tolerance);
    std::cout << buf;
  }
  const std::string stem = g.out_path.empty() ? "verify_report" : g.out_path;
  {
    std::ofstream xml(stem + ".xml", std::ios::binary);
    if (!xml) throw ConfigError("cannot write " + stem + ".xml");
    write_junit_xml(reports, xml);
  }
  {
    std::ofstream csv(stem + ".csv", std::ios::binary);
    if (!csv) throw ConfigError("cannot write " + stem + ".csv");
    write_reports_csv(reports, csv);
  }
  const bool ok = all_pass(reports);
  std::cout << (ok ? "all checks passed\n" : "audit failures present\n");
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasiprobability cutting of quantum circuits: estimators and audits"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_option("--trials", g.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--out", g.out_path, "output path (default: stdout)");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_flag("--dump-circuits", g.dump_circuits, "print the first assembled circuits");
  app.add_option("--threads", g.threads, "worker threads (0 = available parallelism)")
      ->capture_default_str();
  for (auto* opt : app.get_options())
    if (opt->get_name() != "--help") opt->ignore_case();

  std::string extent_config, extent_gate;
  auto* extent = app.add_subcommand("extent", "entanglement measures of a bipartite gate");
  extent->add_option("config", extent_config, "experiment file with gate= or circuit=");
  extent->add_option("--gate", extent_gate, "named gate: cnot, cx, swap, cz, zz(theta)");
  extent->fallthrough();

  std::string spacecut_config;
  auto* spacecut = app.add_subcommand("spacecut", "double-Hadamard-test gate cut estimate");
  spacecut->add_option("config", spacecut_config, "experiment file")->required();
  spacecut->fallthrough();

  std::string hamsim_path;
  HamsimArgs ha;
  auto* hamsim = app.add_subcommand("hamsim", "clustered Hamiltonian simulation estimate");
  hamsim->add_option("config", hamsim_path, "Hamiltonian file or experiment file")->required();
  hamsim->add_option("--t", ha.t, "evolution time")->capture_default_str();
  hamsim->add_option("--eps", ha.eps, "target accuracy")->capture_default_str();
  hamsim->add_option("--r", ha.r, "Trotter step override (0 = automatic)");
  hamsim->add_option("--retry-cap", ha.retry_cap, "sampler retry cap")->capture_default_str();
  hamsim->add_option("--observable", ha.observable, "Pauli observable, e.g. 'Z@0 Z@1'")
      ->capture_default_str();
  hamsim->add_option("--prep", ha.prep_path, "state-prep gate-list file");
  hamsim->add_flag("--conditional-mean", ha.conditional_mean,
                   "score exact conditional means instead of sampled bits");
  hamsim->fallthrough();

  std::string timecut_config;
  TimecutArgs ta;
  auto* timecut = app.add_subcommand("timecut", "wire-cut (measure-and-prepare) estimate");
  timecut->add_option("config", timecut_config, "experiment file");
  timecut->add_option("--cut-wires", ta.cut_wires, "comma-separated wires to cut")
      ->capture_default_str();
  timecut->add_option("--observable", ta.observable, "Pauli observable")->capture_default_str();
  timecut->add_option("--mode", ta.mode, "sampled or analytic")
      ->check(CLI::IsMember({"sampled", "analytic"}))
      ->capture_default_str();
  timecut->add_option("--qubits", ta.qubits, "register width (0 = inferred)");
  timecut->add_option("--prep", ta.prep_path, "state-prep gate-list file");
  timecut->fallthrough();

  auto* verify = app.add_subcommand("verify", "run the oracle audit suite");
  verify->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (extent->parsed()) return run_extent(extent_config, extent_gate, g);
    if (spacecut->parsed())
      return run_spacecut(spacecut_config, g, app.count("--trials") > 0,
                          app.count("--seed") > 0);
    if (hamsim->parsed()) {
      std::map<std::string, bool> given = {
          {"t", hamsim->count("--t") > 0},
          {"eps", hamsim->count("--eps") > 0},
          {"r", hamsim->count("--r") > 0},
          {"retry_cap", hamsim->count("--retry-cap") > 0},
          {"observable", hamsim->count("--observable") > 0},
          {"prep", hamsim->count("--prep") > 0},
          {"conditional_mean", hamsim->count("--conditional-mean") > 0},
          {"seed", app.count("--seed") > 0},
          {"trials", app.count("--trials") > 0}};
      return run_hamsim(hamsim_path, ha, g, given);
    }
    if (timecut->parsed()) {
      std::map<std::string, bool> given = {
          {"cut_wires", timecut->count("--cut-wires") > 0},
          {"observable", timecut->count("--observable") > 0},
          {"mode", timecut->count("--mode") > 0},
          {"qubits", timecut->count("--qubits") > 0},
          {"prep", timecut->count("--prep") > 0},
          {"seed", app.count("--seed") > 0},
          {"trials", app.count("--trials") > 0}};
      return run_timecut(timecut_config, ta, g, given);
    }
    if (verify->parsed()) return run_verify(g);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const RetryCapError& e) {
    std::cerr << "sampler failure: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
